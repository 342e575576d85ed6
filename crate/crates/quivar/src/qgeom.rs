//! Geometry of qubit and quartit states: Bloch and second Hopf maps,
//! stereographic projection, concurrence, SIC overlaps, exact root
//! polynomials, eigenbasis comparisons and E8 lattice checks.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::poly::MultiPoly;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

/// Maximum deviation from unit norm accepted by the projection maps.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl QubitState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        QubitState { alpha, beta }
    }

    pub fn norm(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-14 {
            return Err(Error::NotNormalized(n));
        }
        Ok(QubitState::new(self.alpha / n, self.beta / n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuartitState {
    pub amps: [Complex64; 4],
}

impl QuartitState {
    pub fn new(amps: [Complex64; 4]) -> Self {
        QuartitState { amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-14 {
            return Err(Error::NotNormalized(n));
        }
        Ok(QuartitState::new(self.amps.map(|a| a / n)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.xi * self.xi + self.eta * self.eta + self.zeta * self.zeta).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S4Point {
    pub xi: f64,
    pub eta: f64,
    pub u: f64,
    pub v: f64,
    pub zeta: f64,
}

impl S4Point {
    pub fn norm(&self) -> f64 {
        (self.xi * self.xi + self.eta * self.eta + self.u * self.u + self.v * self.v
            + self.zeta * self.zeta)
            .sqrt()
    }
}

/// The fraction p/q on the projective line; q = 0 encodes the point at
/// infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannPoint {
    pub p: Complex64,
    pub q: Complex64,
}

impl RiemannPoint {
    pub fn infinity() -> Self {
        RiemannPoint { p: Complex64::new(1.0, 0.0), q: Complex64::new(0.0, 0.0) }
    }

    pub fn is_infinity(&self) -> bool {
        self.q.norm() < 1e-12 * self.p.norm().max(1.0)
    }

    pub fn value(&self) -> Complex64 {
        self.p / self.q
    }
}

/// (xi, eta, zeta) = (2 Re(conj(a) b), 2 Im(conj(a) b), |a|^2 - |b|^2).
pub fn bloch_map(psi: &QubitState) -> Result<BlochVector> {
    if (psi.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(psi.norm()));
    }
    let cross = psi.alpha.conj() * psi.beta;
    Ok(BlochVector {
        xi: 2.0 * cross.re,
        eta: 2.0 * cross.im,
        zeta: psi.alpha.norm_sqr() - psi.beta.norm_sqr(),
    })
}

/// s = (xi + i eta) / (1 - zeta), kept projectively so the north pole
/// maps to 1/0.  The chart with the larger denominator is used.
pub fn stereographic(b: &BlochVector) -> RiemannPoint {
    let w = Complex64::new(b.xi, b.eta);
    let q1 = Complex64::new(1.0 - b.zeta, 0.0);
    // (xi + i eta)/(1 - zeta) = (1 + zeta)/(xi - i eta) on the sphere.
    if q1.norm() >= w.norm() {
        RiemannPoint { p: w, q: q1 }
    } else {
        RiemannPoint { p: Complex64::new(1.0 + b.zeta, 0.0), q: w.conj() }
    }
}

pub fn inverse_stereographic(r: &RiemannPoint) -> BlochVector {
    let n = r.p.norm_sqr() + r.q.norm_sqr();
    let cross = r.p * r.q.conj();
    BlochVector {
        xi: 2.0 * cross.re / n,
        eta: 2.0 * cross.im / n,
        zeta: (r.p.norm_sqr() - r.q.norm_sqr()) / n,
    }
}

/// Second Hopf map S^7 -> S^4 on (a, b, c, d):
/// xi + i eta = 2(conj(a) c + conj(b) d), u + iv = 2(ad - bc),
/// zeta = |a|^2 + |b|^2 - |c|^2 - |d|^2.
pub fn second_hopf(psi: &QuartitState) -> Result<S4Point> {
    if (psi.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(psi.norm()));
    }
    let [a, b, c, d] = psi.amps;
    let front = a.conj() * c + b.conj() * d;
    let uv = 2.0 * (a * d - b * c);
    Ok(S4Point {
        xi: 2.0 * front.re,
        eta: 2.0 * front.im,
        u: uv.re,
        v: uv.im,
        zeta: a.norm_sqr() + b.norm_sqr() - c.norm_sqr() - d.norm_sqr(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entanglement {
    pub c: f64,
    pub separable: bool,
}

/// Concurrence c = 2|ad - bc|; separable iff c < tol.
pub fn entanglement(psi: &QuartitState, tol: f64) -> Entanglement {
    let [a, b, c, d] = psi.amps;
    let conc = 2.0 * (a * d - b * c).norm();
    Entanglement { c: conc, separable: conc < tol }
}

/// Quaternion w + x i + y j + z k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    /// z1 + z2 j with z1 = a, z2 = b complex.
    pub fn from_complex_pair(z1: Complex64, z2: Complex64) -> Self {
        Quaternion { w: z1.re, x: z1.im, y: z2.re, z: z2.im }
    }

    pub fn complex_pair(&self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, self.z))
    }

    pub fn conj(&self) -> Self {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Hamilton product with i^2 = j^2 = k^2 = -1 and ij = k.
    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    pub fn scale(&self, s: f64) -> Quaternion {
        Quaternion { w: self.w * s, x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

/// The quaternion pair (Q1, Q2) = (a + b j, c + d j) of a quartit
/// state.
pub fn quaternion_pair(psi: &QuartitState) -> (Quaternion, Quaternion) {
    let [a, b, c, d] = psi.amps;
    (Quaternion::from_complex_pair(a, b), Quaternion::from_complex_pair(c, d))
}

/// Second Hopf map computed through the quaternion pair: with
/// p = Q2 conj(Q1), the point is (2 p_1, 2 p_i, 2 p_j, 2 p_k,
/// |Q1|^2 - |Q2|^2).  Agrees with `second_hopf`.
pub fn second_hopf_quaternion(psi: &QuartitState) -> Result<S4Point> {
    if (psi.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(psi.norm()));
    }
    let (q1, q2) = quaternion_pair(psi);
    let p = q2.mul(&q1.conj());
    Ok(S4Point {
        xi: 2.0 * p.w,
        eta: 2.0 * p.x,
        u: 2.0 * p.y,
        v: 2.0 * p.z,
        zeta: q1.norm_sqr() - q2.norm_sqr(),
    })
}

/// The fiducial state whose Pauli orbit is a SIC POVM:
/// alpha = sqrt((1 + 1/sqrt 3)/2), beta = e^{i pi/4} sqrt((1 - 1/sqrt 3)/2).
pub fn sic_fiducial() -> QubitState {
    let s3 = 3.0f64.sqrt();
    let alpha = ((1.0 + 1.0 / s3) / 2.0).sqrt();
    let beta_mag = ((1.0 - 1.0 / s3) / 2.0).sqrt();
    let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    QubitState::new(Complex64::new(alpha, 0.0), phase * beta_mag)
}

/// Squared overlaps |<psi_i|psi_j>|^2 over the orbit
/// {psi, sx psi, sy psi, sz psi}.
pub fn sic_overlaps(psi: &QubitState) -> [[f64; 4]; 4] {
    let a = psi.alpha;
    let b = psi.beta;
    let orbit = [
        [a, b],
        [b, a],                                            // sx
        [Complex64::new(0.0, -1.0) * b, Complex64::new(0.0, 1.0) * a], // sy
        [a, -b],                                           // sz
    ];
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let ip = orbit[i][0].conj() * orbit[j][0] + orbit[i][1].conj() * orbit[j][1];
            out[i][j] = ip.norm_sqr();
        }
    }
    out
}

/// Exact product (q1 x1 - p1 x2) ... (qn x1 - pn x2) over the listed
/// projective points (p, q).
pub fn root_polynomial(points: &[(CycNum, CycNum)]) -> Result<MultiPoly> {
    let mut out = MultiPoly::constant(&CycNum::one(), 2);
    for (p, q) in points {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Invalid("projective point (0, 0)".into()));
        }
        let factor = MultiPoly::monomial(&[1, 0], q, 2).add(&MultiPoly::monomial(&[0, 1], &-p, 2));
        out = out.mul(&factor);
    }
    Ok(out)
}

/// E8 membership in the even-coordinate model: all coordinates integral
/// or all in Z + 1/2, with an even integer coordinate sum.
pub fn e8_member(v: &[BigRational]) -> bool {
    if v.len() != 8 {
        return false;
    }
    let two = BigRational::from_integer(2.into());
    let ints = v.iter().all(|x| x.is_integer());
    let halves = v.iter().all(|x| !x.is_integer() && (x * &two).is_integer());
    if !(ints || halves) {
        return false;
    }
    let sum = v.iter().fold(BigRational::zero(), |acc, x| acc + x);
    sum.is_integer() && sum.numer().is_even()
}

/// Fixed basis of E8: the D8 simple vectors e1-e2 ... e6-e7 and e6+e7,
/// plus the glue vector (1/2, ..., 1/2).  Validated by checking the
/// Gram determinant is 1 (E8 is unimodular).
pub fn e8_basis() -> Result<CycMatrix> {
    let mut b = CycMatrix::zeros(8, 8);
    for k in 0..6 {
        b.set(k, k, CycNum::one());
        b.set(k, k + 1, CycNum::from_int(-1));
    }
    b.set(6, 5, CycNum::one());
    b.set(6, 6, CycNum::one());
    for j in 0..8 {
        b.set(7, j, CycNum::from_ratio(1, 2));
    }
    let gram = b.mul(&b.transpose())?;
    if gram.det()? != CycNum::one() {
        return Err(Error::Invalid("E8 basis Gram determinant is not 1".into()));
    }
    Ok(b)
}

/// True iff the real unimodular matrix maps every E8 basis vector back
/// into the lattice.
pub fn e8_preserved(m: &CycMatrix) -> Result<bool> {
    if m.nrows() != 8 || m.ncols() != 8 {
        return Err(Error::DimensionMismatch(format!(
            "expected an 8x8 matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !m.is_real() {
        return Err(Error::Invalid("lattice check requires a real matrix".into()));
    }
    let det = m.det()?;
    if det != CycNum::one() && det != CycNum::from_int(-1) {
        return Err(Error::Invalid("lattice check requires |det| = 1".into()));
    }
    let basis = e8_basis()?;
    for k in 0..8 {
        let mut image = Vec::with_capacity(8);
        for i in 0..8 {
            let mut acc = CycNum::zero();
            for j in 0..8 {
                let c = m.get(i, j);
                if !c.is_zero() {
                    acc = &acc + &(c * basis.get(k, j));
                }
            }
            match acc.to_rational() {
                Some(r) => image.push(r),
                None => return Ok(false),
            }
        }
        if !e8_member(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenRelation {
    Columns,
    Rows,
    Both,
    None,
}

impl std::fmt::Display for EigenRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EigenRelation::Columns => "columns",
            EigenRelation::Rows => "rows",
            EigenRelation::Both => "both",
            EigenRelation::None => "none",
        };
        write!(f, "{s}")
    }
}

/// Exact simultaneous eigenbasis of a commuting triple of involutions:
/// for each sign pattern, the common kernel of (T_k - s_k I).
pub fn simultaneous_eigenbasis(triple: &[CycMatrix]) -> Result<Vec<Vec<CycNum>>> {
    let n = triple[0].nrows();
    for (i, a) in triple.iter().enumerate() {
        for b in triple.iter().skip(i + 1) {
            if a.mul(b)? != b.mul(a)? {
                return Err(Error::NonCommutingTriple);
            }
        }
    }
    let mut basis = Vec::new();
    for mask in 0..(1u32 << triple.len()) {
        let mut stacked = CycMatrix::zeros(n * triple.len(), n);
        for (k, t) in triple.iter().enumerate() {
            let sign = if mask >> k & 1 == 0 { 1 } else { -1 };
            for i in 0..n {
                for j in 0..n {
                    let mut v = t.get(i, j).clone();
                    if i == j {
                        v = &v - &CycNum::from_int(sign);
                    }
                    stacked.set(k * n + i, j, v);
                }
            }
        }
        basis.extend(stacked.nullspace());
    }
    Ok(basis)
}

fn vectors_proportional(a: &[CycNum], b: &[CycNum]) -> bool {
    // rank of the 2xn stack is 1 exactly when a and b are parallel
    let pivot = match b.iter().position(|c| !c.is_zero()) {
        Some(p) => p,
        None => return a.iter().all(|c| c.is_zero()),
    };
    if a[pivot].is_zero() {
        return false;
    }
    let lambda = &a[pivot] * &b[pivot].inv().unwrap();
    a.iter().zip(b).all(|(x, y)| *x == &lambda * y)
}

fn match_up_to_phase(vectors: &[Vec<CycNum>], basis: &[Vec<CycNum>]) -> bool {
    if vectors.len() != basis.len() {
        return false;
    }
    let mut used = vec![false; basis.len()];
    for v in vectors {
        let mut hit = false;
        for (k, b) in basis.iter().enumerate() {
            if !used[k] && vectors_proportional(v, b) {
                used[k] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return false;
        }
    }
    true
}

/// Whether the gate's columns and/or rows coincide, up to permutation
/// and per-vector scalars, with the simultaneous eigenbasis of the
/// commuting triple.
pub fn eigenbasis_relation(gate: &CycMatrix, triple: &[CycMatrix]) -> Result<EigenRelation> {
    let n = gate.nrows();
    if triple.iter().any(|t| t.nrows() != n || t.ncols() != n) || gate.ncols() != n {
        return Err(Error::DimensionMismatch("gate/triple size mismatch".into()));
    }
    let basis = simultaneous_eigenbasis(triple)?;
    let cols: Vec<Vec<CycNum>> = (0..n)
        .map(|j| (0..n).map(|i| gate.get(i, j).clone()).collect())
        .collect();
    let rows: Vec<Vec<CycNum>> = (0..n)
        .map(|i| (0..n).map(|j| gate.get(i, j).clone()).collect())
        .collect();
    let col_match = match_up_to_phase(&cols, &basis);
    let row_match = match_up_to_phase(&rows, &basis);
    Ok(match (col_match, row_match) {
        (true, true) => EigenRelation::Both,
        (true, false) => EigenRelation::Columns,
        (false, true) => EigenRelation::Rows,
        (false, false) => EigenRelation::None,
    })
}

/// Convert an exact vector to floating amplitudes.
pub fn to_complex_vec(v: &[CycNum]) -> Vec<Complex64> {
    v.iter().map(|c| c.to_complex64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        v
    }

    #[test]
    fn bloch_map_landmarks() {
        let north = bloch_map(&QubitState::new(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_eq!((north.xi, north.eta, north.zeta), (0.0, 0.0, 1.0));
        let h = 0.5f64.sqrt();
        let plus = bloch_map(&QubitState::new(c(h, 0.0), c(h, 0.0))).unwrap();
        assert!((plus.xi - 1.0).abs() < 1e-12 && plus.eta.abs() < 1e-12 && plus.zeta.abs() < 1e-12);
        assert!(bloch_map(&QubitState::new(c(1.0, 0.0), c(1.0, 0.0))).is_err());
        // global phase invariance
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_state(&mut rng, 2);
            let phase = Complex64::from_polar(1.0, rng.gen::<f64>() * 6.28);
            let b1 = bloch_map(&QubitState::new(v[0], v[1])).unwrap();
            let b2 = bloch_map(&QubitState::new(phase * v[0], phase * v[1])).unwrap();
            assert!((b1.xi - b2.xi).abs() < 1e-12);
            assert!((b1.eta - b2.eta).abs() < 1e-12);
            assert!((b1.zeta - b2.zeta).abs() < 1e-12);
            assert!((b1.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stereographic_poles_and_roundtrip() {
        let north = stereographic(&BlochVector { xi: 0.0, eta: 0.0, zeta: 1.0 });
        assert!(north.is_infinity());
        let east = stereographic(&BlochVector { xi: 1.0, eta: 0.0, zeta: 0.0 });
        assert!((east.value() - c(1.0, 0.0)).norm() < 1e-12);
        let west = stereographic(&BlochVector { xi: -1.0, eta: 0.0, zeta: 0.0 });
        assert!((west.value() - c(-1.0, 0.0)).norm() < 1e-12);
        let back = inverse_stereographic(&RiemannPoint::infinity());
        assert_eq!((back.xi, back.eta, back.zeta), (0.0, 0.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let v = random_state(&mut rng, 2);
            let b = bloch_map(&QubitState::new(v[0], v[1])).unwrap();
            let r = stereographic(&b);
            let b2 = inverse_stereographic(&r);
            let err = ((b.xi - b2.xi).powi(2) + (b.eta - b2.eta).powi(2)
                + (b.zeta - b2.zeta).powi(2))
            .sqrt();
            assert!(err < 1e-10, "roundtrip error {err}");
        }
    }

    #[test]
    fn second_hopf_landmarks() {
        let zero = |_| c(0.0, 0.0);
        let mut amps = [c(1.0, 0.0), zero(0), zero(0), zero(0)];
        let p = second_hopf(&QuartitState::new(amps)).unwrap();
        assert_eq!((p.xi, p.eta, p.u, p.v, p.zeta), (0.0, 0.0, 0.0, 0.0, 1.0));
        let h = 0.5f64.sqrt();
        amps = [c(h, 0.0), zero(0), zero(0), c(h, 0.0)];
        let bell = second_hopf(&QuartitState::new(amps)).unwrap();
        assert!(bell.xi.abs() < 1e-12 && bell.eta.abs() < 1e-12 && bell.zeta.abs() < 1e-12);
        assert!((bell.u - 1.0).abs() < 1e-12 && bell.v.abs() < 1e-12);
        amps = [c(h, 0.0), zero(0), c(h, 0.0), zero(0)];
        let sep = second_hopf(&QuartitState::new(amps)).unwrap();
        assert!(sep.u.abs() < 1e-12 && sep.v.abs() < 1e-12);
        assert!((sep.xi - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let v = random_state(&mut rng, 4);
            let s = QuartitState::new([v[0], v[1], v[2], v[3]]);
            let p = second_hopf(&s).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-12);
            // u = v = 0 iff separable
            let e = entanglement(&s, 1e-10);
            let uv = (p.u * p.u + p.v * p.v).sqrt();
            assert!((uv - e.c).abs() < 1e-12);
        }
    }

    #[test]
    fn quaternion_algebra_and_hopf_agreement() {
        let i = Quaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
        let j = Quaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
        let k = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };
        let m1 = Quaternion { w: -1.0, x: 0.0, y: 0.0, z: 0.0 };
        assert_eq!(i.mul(&i), m1);
        assert_eq!(j.mul(&j), m1);
        assert_eq!(k.mul(&k), m1);
        assert_eq!(i.mul(&j), k);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let v = random_state(&mut rng, 4);
            let s = QuartitState::new([v[0], v[1], v[2], v[3]]);
            let p1 = second_hopf(&s).unwrap();
            let p2 = second_hopf_quaternion(&s).unwrap();
            for (a, b) in [
                (p1.xi, p2.xi),
                (p1.eta, p2.eta),
                (p1.u, p2.u),
                (p1.v, p2.v),
                (p1.zeta, p2.zeta),
            ] {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fiber_action_fixes_the_base_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let v = random_state(&mut rng, 4);
            let (q1, q2) = quaternion_pair(&QuartitState::new([v[0], v[1], v[2], v[3]]));
            let mut f = Quaternion {
                w: rng.gen::<f64>() - 0.5,
                x: rng.gen::<f64>() - 0.5,
                y: rng.gen::<f64>() - 0.5,
                z: rng.gen::<f64>() - 0.5,
            };
            f = f.scale(1.0 / f.norm_sqr().sqrt());
            let (r1, r2) = (q1.mul(&f), q2.mul(&f));
            let (z1, w1) = r1.complex_pair();
            let (z2, w2) = r2.complex_pair();
            let before = second_hopf_quaternion(&QuartitState::new([
                q1.complex_pair().0,
                q1.complex_pair().1,
                q2.complex_pair().0,
                q2.complex_pair().1,
            ]))
            .unwrap();
            let after =
                second_hopf_quaternion(&QuartitState::new([z1, w1, z2, w2])).unwrap();
            for (a, b) in [
                (before.xi, after.xi),
                (before.eta, after.eta),
                (before.u, after.u),
                (before.v, after.v),
                (before.zeta, after.zeta),
            ] {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sic_orbit_has_equal_overlaps() {
        let psi = sic_fiducial();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let ov = sic_overlaps(&psi);
        for i in 0..4 {
            assert!((ov[i][i] - 1.0).abs() < 1e-12);
            for j in 0..4 {
                if i != j {
                    assert!((ov[i][j] - 1.0 / 3.0).abs() < 1e-12);
                }
            }
        }
        // degenerate for the north pole
        let ov0 = sic_overlaps(&QubitState::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert!((ov0[0][3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn root_polynomial_expands_exactly() {
        // single point 1/0 gives -x2
        let single = root_polynomial(&[(CycNum::one(), CycNum::zero())]).unwrap();
        assert_eq!(single.coefficient(&[0, 1]), CycNum::from_int(-1));
        assert_eq!(single.num_terms(), 1);
        assert!(root_polynomial(&[(CycNum::zero(), CycNum::zero())]).is_err());
        // vanishing at the roots
        let pts = [
            (CycNum::from_int(2), CycNum::one()),
            (CycNum::from_int(-1), CycNum::from_int(3)),
        ];
        let f = root_polynomial(&pts).unwrap();
        assert_eq!(f.homogeneous_degree(), Some(2));
        for (p, q) in &pts {
            assert!(f.eval(&[p.clone(), q.clone()]).is_zero());
        }
    }

    #[test]
    fn e8_membership_and_basis() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let mut v = vec![r(1, 1), r(1, 1)];
        v.extend(std::iter::repeat(r(0, 1)).take(6));
        assert!(e8_member(&v));
        assert!(e8_member(&vec![r(1, 2); 8]));
        let mut w = vec![r(1, 1)];
        w.extend(std::iter::repeat(r(0, 1)).take(7));
        assert!(!e8_member(&w));
        let mut mixed = vec![r(1, 1)];
        mixed.extend(std::iter::repeat(r(1, 2)).take(7));
        assert!(!e8_member(&mixed));
        assert!(e8_basis().is_ok());
    }

    #[test]
    fn coordinate_maps_preserve_e8() {
        let x8 = CycMatrix::shift(8);
        assert!(e8_preserved(&x8).unwrap());
        let mut flip = CycMatrix::identity(8);
        for i in [1, 3, 5, 7] {
            flip.set(i, i, CycNum::from_int(-1));
        }
        assert!(e8_preserved(&flip).unwrap());
        // sqrt2 * I is real but not unimodular
        let bad = CycMatrix::identity(8).scalar_mul(&CycNum::sqrt2());
        assert!(e8_preserved(&bad).is_err());
    }

    #[test]
    fn eigenbasis_of_the_two_qubit_involution_triple() {
        let xx = CycMatrix::sigma_x().kron(&CycMatrix::sigma_x());
        let yy = CycMatrix::sigma_y().kron(&CycMatrix::sigma_y());
        let zz = CycMatrix::sigma_z().kron(&CycMatrix::sigma_z());
        let basis = simultaneous_eigenbasis(&[xx.clone(), yy.clone(), zz.clone()]).unwrap();
        assert_eq!(basis.len(), 4);
        // every simultaneous eigenvector is maximally entangled
        for v in &basis {
            let amps = to_complex_vec(v);
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let s = QuartitState::new([
                amps[0] / norm,
                amps[1] / norm,
                amps[2] / norm,
                amps[3] / norm,
            ]);
            let e = entanglement(&s, 1e-10);
            assert!((e.c - 1.0).abs() < 1e-12);
        }
        // a gate whose columns are exactly that eigenbasis
        let mut gate = CycMatrix::zeros(4, 4);
        for (j, v) in basis.iter().enumerate() {
            for (i, val) in v.iter().enumerate() {
                gate.set(i, j, val.clone());
            }
        }
        let rel = eigenbasis_relation(&gate, &[xx.clone(), yy.clone(), zz.clone()]).unwrap();
        assert!(rel == EigenRelation::Columns || rel == EigenRelation::Both);
        // non-commuting triple is rejected
        let bad = simultaneous_eigenbasis(&[
            CycMatrix::sigma_x().kron(&CycMatrix::identity(2)),
            CycMatrix::sigma_y().kron(&CycMatrix::identity(2)),
            zz,
        ]);
        assert!(matches!(bad, Err(Error::NonCommutingTriple)));
    }
}
