//! Exact arithmetic in the cyclotomic field Q(zeta_24).
//!
//! Elements are stored on the power basis 1, z, ..., z^7 modulo
//! Phi_24(x) = x^8 - x^4 + 1, with a common positive denominator. The field
//! contains i = z^6, sqrt(2) = z + z^3 - z^5 and sqrt(3) = 2 z^2 - z^6, which
//! covers every scalar appearing in the gate and invariant catalog.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Largest magnitude kept in the fixed-width representation. Chosen so that
/// an 8x8 convolution of two in-range operands cannot overflow i128.
const SMALL_LIMIT: i64 = 1 << 60;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigRepr {
    nums: [BigInt; 8],
    den: BigInt,
}

/// A number in Q(zeta_24), always in lowest terms with positive denominator.
/// The wide variant demotes back to the fixed-width one whenever the
/// coordinates fit, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CycNum {
    Small { nums: [i64; 8], den: i64 },
    Big(Box<BigRepr>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce z^e (0 <= e < 24) onto the power basis and accumulate coeff * z^e.
fn add_power(coords: &mut [i128; 8], e: usize, coeff: i128) {
    let mut e = e % 24;
    let mut c = coeff;
    if e >= 12 {
        e -= 12;
        c = -c;
    }
    if e >= 8 {
        // z^8 = z^4 - 1
        coords[e - 4] += c;
        coords[e - 8] -= c;
    } else {
        coords[e] += c;
    }
}

fn add_power_big(coords: &mut [BigInt; 8], e: usize, coeff: &BigInt) {
    let mut e = e % 24;
    let mut neg = false;
    if e >= 12 {
        e -= 12;
        neg = true;
    }
    let c = if neg { -coeff } else { coeff.clone() };
    if e >= 8 {
        coords[e - 4] += &c;
        coords[e - 8] -= &c;
    } else {
        coords[e] += &c;
    }
}

fn normalize_i128(mut nums: [i128; 8], mut den: i128) -> CycNum {
    debug_assert!(den != 0);
    if den < 0 {
        den = -den;
        for n in nums.iter_mut() {
            *n = -*n;
        }
    }
    let mut g = den;
    for n in nums.iter() {
        g = gcd_i128(g, *n);
        if g == 1 {
            break;
        }
    }
    if g > 1 {
        den /= g;
        for n in nums.iter_mut() {
            *n /= g;
        }
    }
    let fits = den <= SMALL_LIMIT as i128 && nums.iter().all(|n| n.abs() <= SMALL_LIMIT as i128);
    if fits {
        let mut small = [0i64; 8];
        for (s, n) in small.iter_mut().zip(nums.iter()) {
            *s = *n as i64;
        }
        CycNum::Small { nums: small, den: den as i64 }
    } else {
        let mut big: [BigInt; 8] = Default::default();
        for (b, n) in big.iter_mut().zip(nums.iter()) {
            *b = BigInt::from(*n);
        }
        CycNum::Big(Box::new(BigRepr { nums: big, den: BigInt::from(den) }))
    }
}

fn normalize_big(mut nums: [BigInt; 8], mut den: BigInt) -> CycNum {
    debug_assert!(!den.is_zero());
    if den.sign() == Sign::Minus {
        den = -den;
        for n in nums.iter_mut() {
            *n = -std::mem::take(n);
        }
    }
    let mut g = den.clone();
    for n in nums.iter() {
        if g == BigInt::from(1) {
            break;
        }
        g = num_integer::Integer::gcd(&g, n);
    }
    if g > BigInt::from(1) {
        den /= &g;
        for n in nums.iter_mut() {
            *n /= &g;
        }
    }
    let limit = BigInt::from(SMALL_LIMIT);
    let fits = den <= limit && nums.iter().all(|n| n.abs() <= limit);
    if fits {
        let mut small = [0i64; 8];
        for (s, n) in small.iter_mut().zip(nums.iter()) {
            *s = n.to_i64().unwrap();
        }
        CycNum::Small { nums: small, den: den.to_i64().unwrap() }
    } else {
        CycNum::Big(Box::new(BigRepr { nums, den }))
    }
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum::Small { nums: [0; 8], den: 1 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        let mut nums = [0i128; 8];
        nums[0] = n as i128;
        normalize_i128(nums, 1)
    }

    /// n/d as an element of the rational subfield.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        let mut nums = [0i128; 8];
        nums[0] = n as i128;
        normalize_i128(nums, d as i128)
    }

    pub fn from_bigrational(r: &BigRational) -> Self {
        let mut nums: [BigInt; 8] = Default::default();
        nums[0] = r.numer().clone();
        normalize_big(nums, r.denom().clone())
    }

    /// zeta_24^k for any integer k.
    pub fn zeta(k: i64) -> Self {
        let e = k.rem_euclid(24) as usize;
        let mut coords = [0i128; 8];
        add_power(&mut coords, e, 1);
        normalize_i128(coords, 1)
    }

    /// The imaginary unit i = zeta^6.
    pub fn i() -> Self {
        Self::zeta(6)
    }

    /// sqrt(2) = zeta + zeta^3 - zeta^5.
    pub fn sqrt2() -> Self {
        CycNum::Small { nums: [0, 1, 0, 1, 0, -1, 0, 0], den: 1 }
    }

    /// sqrt(3) = 2 zeta^2 - zeta^6.
    pub fn sqrt3() -> Self {
        CycNum::Small { nums: [0, 0, 2, 0, 0, 0, -1, 0], den: 1 }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CycNum::Small { nums, .. } => nums.iter().all(|n| *n == 0),
            // canonical zero is always Small
            CycNum::Big(_) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CycNum::Small { nums, den: 1 } if nums[0] == 1 && nums[1..].iter().all(|n| *n == 0))
    }

    fn big_parts(&self) -> ([BigInt; 8], BigInt) {
        match self {
            CycNum::Small { nums, den } => {
                let mut big: [BigInt; 8] = Default::default();
                for (b, n) in big.iter_mut().zip(nums.iter()) {
                    *b = BigInt::from(*n);
                }
                (big, BigInt::from(*den))
            }
            CycNum::Big(b) => (b.nums.clone(), b.den.clone()),
        }
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        if let (CycNum::Small { nums: a, den: ad }, CycNum::Small { nums: b, den: bd }) = (self, other) {
            let ad = *ad as i128;
            let bd = *bd as i128;
            let mut out = [0i128; 8];
            for k in 0..8 {
                out[k] = a[k] as i128 * bd + b[k] as i128 * ad;
            }
            return normalize_i128(out, ad * bd);
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = other.big_parts();
        let mut out: [BigInt; 8] = Default::default();
        for k in 0..8 {
            out[k] = &an[k] * &bd + &bn[k] * &ad;
        }
        normalize_big(out, ad * bd)
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNum {
        match self {
            CycNum::Small { nums, den } => {
                let mut out = [0i64; 8];
                for (o, n) in out.iter_mut().zip(nums.iter()) {
                    *o = -n;
                }
                CycNum::Small { nums: out, den: *den }
            }
            CycNum::Big(b) => {
                let mut nums: [BigInt; 8] = Default::default();
                for (o, n) in nums.iter_mut().zip(b.nums.iter()) {
                    *o = -n;
                }
                CycNum::Big(Box::new(BigRepr { nums, den: b.den.clone() }))
            }
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        if self.is_zero() || other.is_zero() {
            return CycNum::zero();
        }
        if let (CycNum::Small { nums: a, den: ad }, CycNum::Small { nums: b, den: bd }) = (self, other) {
            let mut conv = [0i128; 15];
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let ai = ai as i128;
                for (j, &bj) in b.iter().enumerate() {
                    if bj != 0 {
                        conv[i + j] += ai * bj as i128;
                    }
                }
            }
            for k in (8..15).rev() {
                let c = conv[k];
                if c != 0 {
                    conv[k - 4] += c;
                    conv[k - 8] -= c;
                    conv[k] = 0;
                }
            }
            let mut out = [0i128; 8];
            out.copy_from_slice(&conv[..8]);
            return normalize_i128(out, *ad as i128 * *bd as i128);
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = other.big_parts();
        let mut conv: Vec<BigInt> = vec![BigInt::zero(); 15];
        for (i, ai) in an.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in bn.iter().enumerate() {
                if !bj.is_zero() {
                    conv[i + j] += ai * bj;
                }
            }
        }
        for k in (8..15).rev() {
            let c = std::mem::take(&mut conv[k]);
            if !c.is_zero() {
                conv[k - 4] += &c;
                conv[k - 8] -= &c;
            }
        }
        let mut out: [BigInt; 8] = Default::default();
        for (o, c) in out.iter_mut().zip(conv.into_iter()) {
            *o = c;
        }
        normalize_big(out, ad * bd)
    }

    /// Galois automorphism zeta -> zeta^k; k must be coprime to 24.
    pub fn galois(&self, k: u32) -> CycNum {
        assert!(k % 2 == 1 && k % 3 != 0, "exponent not coprime to 24");
        match self {
            CycNum::Small { nums, den } => {
                let mut out = [0i128; 8];
                for (j, &c) in nums.iter().enumerate() {
                    if c != 0 {
                        add_power(&mut out, (j * k as usize) % 24, c as i128);
                    }
                }
                normalize_i128(out, *den as i128)
            }
            CycNum::Big(b) => {
                let mut out: [BigInt; 8] = Default::default();
                for (j, c) in b.nums.iter().enumerate() {
                    if !c.is_zero() {
                        add_power_big(&mut out, (j * k as usize) % 24, c);
                    }
                }
                normalize_big(out, b.den.clone())
            }
        }
    }

    /// Complex conjugation, i.e. zeta -> zeta^23.
    pub fn conj(&self) -> CycNum {
        self.galois(23)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn is_rational(&self) -> bool {
        match self {
            CycNum::Small { nums, .. } => nums[1..].iter().all(|n| *n == 0),
            CycNum::Big(b) => b.nums[1..].iter().all(|n| n.is_zero()),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        let (nums, den) = self.big_parts();
        Some(BigRational::new(nums[0].clone(), den))
    }

    /// Multiplicative inverse via the product of all nontrivial Galois
    /// conjugates; the full product with self is the rational field norm.
    pub fn inv(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        let mut prod = CycNum::one();
        for k in [5u32, 7, 11, 13, 17, 19, 23] {
            prod = prod.mul(&self.galois(k));
        }
        let norm = self.mul(&prod);
        let norm_rat = norm
            .to_rational()
            .expect("field norm must be rational");
        debug_assert!(!norm_rat.is_zero());
        let scale = CycNum::from_bigrational(&norm_rat.recip());
        Some(prod.mul(&scale))
    }

    pub fn pow(&self, e: i64) -> CycNum {
        if e < 0 {
            return self.inv().expect("inverse of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = CycNum::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The entry as a machine-size rational, when it is rational and fits.
    pub fn as_rational_i64(&self) -> Option<(i64, i64)> {
        match self {
            CycNum::Small { nums, den } if nums[1..].iter().all(|n| *n == 0) => {
                Some((nums[0], *den))
            }
            _ => None,
        }
    }

    pub fn to_complex64(&self) -> num_complex::Complex64 {
        use std::f64::consts::PI;
        let (nums, den) = match self {
            CycNum::Small { nums, den } => {
                let mut f = [0f64; 8];
                for (o, n) in f.iter_mut().zip(nums.iter()) {
                    *o = *n as f64;
                }
                (f, *den as f64)
            }
            CycNum::Big(b) => {
                let mut f = [0f64; 8];
                for (o, n) in f.iter_mut().zip(b.nums.iter()) {
                    *o = n.to_f64().unwrap_or(f64::NAN);
                }
                (f, b.den.to_f64().unwrap_or(f64::NAN))
            }
        };
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (j, c) in nums.iter().enumerate() {
            if *c != 0.0 {
                let th = PI * j as f64 / 12.0;
                acc += num_complex::Complex64::new(th.cos(), th.sin()) * *c;
            }
        }
        acc / den
    }

    /// Canonical byte encoding: per coordinate, the reduced rational as a
    /// sign byte plus length-prefixed magnitude bytes. Equal values always
    /// encode identically, independent of internal variant.
    pub fn canonical_bytes(&self, out: &mut Vec<u8>) {
        match self {
            CycNum::Small { nums, den } => {
                for &n in nums.iter() {
                    if n == 0 {
                        out.push(0);
                        continue;
                    }
                    let g = gcd_i128(n as i128, *den as i128) as i64;
                    out.push(if n > 0 { 1 } else { 2 });
                    push_u64(out, (n.unsigned_abs()) / g.unsigned_abs());
                    push_u64(out, (*den as u64) / g.unsigned_abs());
                }
            }
            CycNum::Big(b) => {
                for n in b.nums.iter() {
                    if n.is_zero() {
                        out.push(0);
                        continue;
                    }
                    let g = num_integer::Integer::gcd(n, &b.den);
                    out.push(if n.sign() == Sign::Plus { 1 } else { 2 });
                    push_bigint(out, &(n.abs() / &g));
                    push_bigint(out, &(&b.den / &g));
                }
            }
        }
    }
}

impl CycNum {
    /// Inverse of `canonical_bytes`: consumes one encoded value from
    /// `bytes` starting at `*pos`.
    pub fn read_canonical(bytes: &[u8], pos: &mut usize) -> CycNum {
        let mut nums: [BigInt; 8] = Default::default();
        let mut dens: [BigInt; 8] = std::array::from_fn(|_| BigInt::from(1));
        for j in 0..8 {
            let sign = bytes[*pos];
            *pos += 1;
            if sign == 0 {
                continue;
            }
            let mag = read_magnitude(bytes, pos);
            nums[j] = if sign == 2 { -mag } else { mag };
            dens[j] = read_magnitude(bytes, pos);
        }
        let mut den = BigInt::from(1);
        for d in dens.iter() {
            den = num_integer::Integer::lcm(&den, d);
        }
        for j in 0..8 {
            nums[j] *= &den / &dens[j];
        }
        normalize_big(nums, den)
    }
}

fn read_magnitude(bytes: &[u8], pos: &mut usize) -> BigInt {
    let mut len = 0u64;
    let mut shift = 0;
    loop {
        let b = bytes[*pos];
        *pos += 1;
        len |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            break;
        }
        shift += 7;
    }
    let end = *pos + len as usize;
    let v = BigInt::from_bytes_be(Sign::Plus, &bytes[*pos..end]);
    *pos = end;
    v
}

fn push_u64(out: &mut Vec<u8>, v: u64) {
    let bytes = v.to_be_bytes();
    let start = bytes.iter().position(|b| *b != 0).unwrap_or(7);
    out.push((8 - start) as u8);
    out.extend_from_slice(&bytes[start..]);
}

fn push_bigint(out: &mut Vec<u8>, v: &BigInt) {
    let (_, bytes) = v.to_bytes_be();
    // varint length prefix
    let mut len = bytes.len() as u64;
    loop {
        let mut b = (len & 0x7f) as u8;
        len >>= 7;
        if len != 0 {
            b |= 0x80;
        }
        out.push(b);
        if len == 0 {
            break;
        }
    }
    out.extend_from_slice(&bytes);
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (nums, den) = self.big_parts();
        if nums.iter().all(|n| n.is_zero()) {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, n) in nums.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let mag = n.abs();
            if first {
                if n.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if n.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag == BigInt::from(1) && den == BigInt::from(1);
            if j == 0 {
                if den == BigInt::from(1) {
                    write!(f, "{}", mag)?;
                } else {
                    write!(f, "{}/{}", mag, den)?;
                }
            } else {
                if !unit_coeff {
                    if den == BigInt::from(1) {
                        write!(f, "{}*", mag)?;
                    } else {
                        write!(f, "{}/{}*", mag, den)?;
                    }
                }
                if j == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", j)?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        CycNum::add(self, rhs)
    }
}

impl std::ops::Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        CycNum::sub(self, rhs)
    }
}

impl std::ops::Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        CycNum::mul(self, rhs)
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum::neg(self)
    }
}
