//! Finite matrix-group closure by breadth-first multiplication, with
//! fingerprints (order statistics, center, derived subgroup), quotient
//! tables, and small permutation reference groups for isomorphism checks.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::matrix::{CycMatrix, MonomialForm};
use num_integer::Integer;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

const CHUNK_BYTES: usize = 64 << 20;

/// Append-only arena of variable-length encoded elements.
struct ElementStore {
    chunks: Vec<Vec<u8>>,
    offsets: Vec<(u32, u32)>,
}

impl ElementStore {
    fn new() -> Self {
        ElementStore {
            chunks: vec![Vec::with_capacity(CHUNK_BYTES)],
            offsets: Vec::new(),
        }
    }

    fn push(&mut self, bytes: &[u8]) {
        if self.chunks.last().unwrap().len() + bytes.len() > CHUNK_BYTES {
            self.chunks.push(Vec::with_capacity(CHUNK_BYTES));
        }
        let chunk = self.chunks.len() - 1;
        let start = self.chunks[chunk].len();
        self.chunks[chunk].extend_from_slice(bytes);
        self.offsets.push((chunk as u32, start as u32));
    }

    fn get(&self, idx: usize) -> &[u8] {
        let (chunk, start) = self.offsets[idx];
        &self.chunks[chunk as usize][start as usize..]
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }
}

fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            break;
        }
        out.push(byte | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> u64 {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let byte = bytes[*pos];
        *pos += 1;
        v |= ((byte & 0x7f) as u64) << shift;
        if byte & 0x80 == 0 {
            break;
        }
        shift += 7;
    }
    v
}

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

fn unzigzag(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

const TAG_RATIONAL: u8 = 0;
const TAG_GENERAL: u8 = 1;

/// Encode a matrix for arena storage.  Matrices with uniformly small
/// rational entries use a compact common-denominator form; everything
/// else falls back to per-entry cyclotomic coordinates.
fn encode_matrix(m: &CycMatrix, out: &mut Vec<u8>) {
    out.clear();
    'rational: {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        let mut den: i64 = 1;
        for e in m.entries() {
            match e.as_rational_i64() {
                Some((n, d)) => {
                    let l = (den as i128).lcm(&(d as i128));
                    if l > (1 << 60) {
                        break 'rational;
                    }
                    den = l as i64;
                    entries.push((n, d));
                }
                None => break 'rational,
            }
        }
        let mut scaled = Vec::with_capacity(entries.len());
        for (n, d) in &entries {
            let s = (*n as i128) * ((den / d) as i128);
            if s.unsigned_abs() > (1 << 62) {
                break 'rational;
            }
            scaled.push(s as i64);
        }
        out.push(TAG_RATIONAL);
        out.push(m.nrows() as u8);
        out.push(m.ncols() as u8);
        write_varint(out, den as u64);
        for s in scaled {
            write_varint(out, zigzag(s));
        }
        return;
    }
    out.push(TAG_GENERAL);
    out.push(m.nrows() as u8);
    out.push(m.ncols() as u8);
    for e in m.entries() {
        e.canonical_bytes(out);
    }
}

fn decode_matrix(bytes: &[u8]) -> CycMatrix {
    let tag = bytes[0];
    let nrows = bytes[1] as usize;
    let ncols = bytes[2] as usize;
    let mut pos = 3;
    let mut m = CycMatrix::zeros(nrows, ncols);
    match tag {
        TAG_RATIONAL => {
            let den = read_varint(bytes, &mut pos) as i64;
            for i in 0..nrows {
                for j in 0..ncols {
                    let num = unzigzag(read_varint(bytes, &mut pos));
                    if num != 0 {
                        m.set(i, j, CycNum::from_ratio(num, den));
                    }
                }
            }
        }
        TAG_GENERAL => {
            for i in 0..nrows {
                for j in 0..ncols {
                    m.set(i, j, CycNum::read_canonical(bytes, &mut pos));
                }
            }
        }
        _ => unreachable!("unknown element tag"),
    }
    m
}

/// A finite group of matrices, stored in discovery order.  Index 0 is
/// always the identity.
pub struct Closure {
    dim: usize,
    store: ElementStore,
    digests: Vec<[u8; 16]>,
    index: HashMap<[u8; 16], u32>,
    generators: Vec<CycMatrix>,
}

impl Closure {
    pub fn order(&self) -> u64 {
        self.store.len() as u64
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CycMatrix] {
        &self.generators
    }

    pub fn element(&self, idx: usize) -> CycMatrix {
        decode_matrix(self.store.get(idx))
    }

    pub fn digest_at(&self, idx: usize) -> [u8; 16] {
        self.digests[idx]
    }

    pub fn index_of(&self, m: &CycMatrix) -> Option<u32> {
        self.index.get(&m.digest()).copied()
    }

    pub fn contains(&self, m: &CycMatrix) -> bool {
        self.index.contains_key(&m.digest())
    }

    pub fn iter(&self) -> impl Iterator<Item = CycMatrix> + '_ {
        (0..self.store.len()).map(|i| self.element(i))
    }
}

/// Right-multiply `a` by a monomial matrix without a full product:
/// column `form.col[k]` of the result is column `k` of `a` scaled by
/// `form.scale[k]`.
fn mul_monomial(a: &CycMatrix, form: &MonomialForm) -> CycMatrix {
    let n = a.nrows();
    let m = form.col.len();
    let mut out = CycMatrix::zeros(n, m);
    for k in 0..m {
        let j = form.col[k];
        for i in 0..n {
            let e = a.get(i, k);
            if !e.is_zero() {
                out.set(i, j, e * &form.scale[k]);
            }
        }
    }
    out
}

enum PreparedGen {
    Monomial(MonomialForm),
    Dense(CycMatrix),
}

/// Breadth-first closure of the monoid generated by `gens`; for
/// invertible generators of a finite group this is the group itself.
/// Fails with `CapExceeded` once more than `cap` distinct elements are
/// found.
pub fn closure(gens: &[CycMatrix], cap: usize) -> Result<Closure> {
    if gens.is_empty() {
        return Err(Error::Invalid("closure requires at least one generator".into()));
    }
    let dim = gens[0].nrows();
    for g in gens {
        if g.nrows() != dim || g.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, expected {}x{}",
                g.nrows(),
                g.ncols(),
                dim,
                dim
            )));
        }
    }
    let prepared: Vec<PreparedGen> = gens
        .iter()
        .map(|g| match g.monomial_form() {
            Some(f) => PreparedGen::Monomial(f),
            None => PreparedGen::Dense(g.clone()),
        })
        .collect();

    let mut c = Closure {
        dim,
        store: ElementStore::new(),
        digests: Vec::new(),
        index: HashMap::new(),
        generators: gens.to_vec(),
    };
    let mut buf = Vec::new();
    let identity = CycMatrix::identity(dim);
    let d = identity.digest();
    encode_matrix(&identity, &mut buf);
    c.store.push(&buf);
    c.digests.push(d);
    c.index.insert(d, 0);

    let mut cursor = 0usize;
    while cursor < c.store.len() {
        let e = c.element(cursor);
        for g in &prepared {
            let product = match g {
                PreparedGen::Monomial(f) => mul_monomial(&e, f),
                PreparedGen::Dense(m) => e.mul(m)?,
            };
            let d = product.digest();
            if let std::collections::hash_map::Entry::Vacant(v) = c.index.entry(d) {
                if c.store.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                v.insert(c.store.len() as u32);
                encode_matrix(&product, &mut buf);
                c.store.push(&buf);
                c.digests.push(d);
            }
        }
        cursor += 1;
    }
    Ok(c)
}

/// Isomorphism-invariant summary of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub center_order: u64,
    pub derived_order: u64,
    pub abelianization_order: u64,
    pub exponent: u64,
    pub order_histogram: BTreeMap<u64, u64>,
}

impl std::fmt::Display for GroupFingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let hist: Vec<String> = self
            .order_histogram
            .iter()
            .map(|(k, v)| format!("{}:{}", k, v))
            .collect();
        write!(
            f,
            "order={} center={} derived={} ab={} exp={} hist={{{}}}",
            self.order,
            self.center_order,
            self.derived_order,
            self.abelianization_order,
            self.exponent,
            hist.join(",")
        )
    }
}

/// Full fingerprint of a matrix-group closure.  Intended for groups of
/// modest order; every element is decoded and walked to its power
/// order.
pub fn fingerprint(c: &Closure) -> Result<GroupFingerprint> {
    let n = c.order() as usize;
    let identity_digest = c.digest_at(0);
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut exponent = 1u64;
    for idx in 0..n {
        let e = c.element(idx);
        let mut p = e.clone();
        let mut ord = 1u64;
        while p.digest() != identity_digest {
            p = p.mul(&e)?;
            ord += 1;
        }
        *histogram.entry(ord).or_insert(0) += 1;
        exponent = exponent.lcm(&ord);
    }
    let mut center = 0u64;
    for idx in 0..n {
        let e = c.element(idx);
        let mut central = true;
        for g in c.generators() {
            if e.mul(g)? != g.mul(&e)? {
                central = false;
                break;
            }
        }
        if central {
            center += 1;
        }
    }
    let derived = derived_subgroup(c)?;
    let derived_order = derived.order();
    Ok(GroupFingerprint {
        order: n as u64,
        center_order: center,
        derived_order,
        abelianization_order: n as u64 / derived_order,
        exponent,
        order_histogram: histogram,
    })
}

/// Derived subgroup as the normal closure of the generator commutators.
pub fn derived_subgroup(c: &Closure) -> Result<Closure> {
    let gens = c.generators();
    let mut seeds: Vec<CycMatrix> = Vec::new();
    let inverses: Vec<CycMatrix> = gens.iter().map(|g| g.inverse()).collect::<Result<_>>()?;
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            if i == j {
                continue;
            }
            let comm = inverses[i].mul(&inverses[j])?.mul(a)?.mul(b)?;
            if !comm.is_identity() {
                seeds.push(comm);
            }
        }
    }
    if seeds.is_empty() {
        seeds.push(CycMatrix::identity(c.dim()));
    }
    // Grow to the normal closure: conjugate the current subgroup's
    // generators by the parent generators until nothing new appears.
    loop {
        let sub = closure(&seeds, c.order() as usize)?;
        let mut grew = false;
        for (g, gi) in gens.iter().zip(&inverses) {
            for s in seeds.clone() {
                let conj = g.mul(&s)?.mul(gi)?;
                if !sub.contains(&conj) {
                    seeds.push(conj);
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(sub);
        }
    }
}

pub fn is_subgroup(sub: &Closure, g: &Closure) -> bool {
    sub.dim() == g.dim() && (0..sub.order() as usize).all(|i| g.index.contains_key(&sub.digest_at(i)))
}

/// Normality of `sub` in the group generated by `g`'s generators:
/// conjugation by each generator must map `sub` into itself.
pub fn is_normal(sub: &Closure, g: &Closure) -> Result<bool> {
    if !is_subgroup(sub, g) {
        return Ok(false);
    }
    for gen in g.generators() {
        let gi = gen.inverse()?;
        for idx in 0..sub.order() as usize {
            let s = sub.element(idx);
            let conj = gen.mul(&s)?.mul(&gi)?;
            if !sub.contains(&conj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Multiplication table of a finite group on indices `0..n`, with the
/// identity at index 0.
pub struct MulTable {
    n: usize,
    t: Vec<u32>,
}

impl MulTable {
    pub fn order(&self) -> u64 {
        self.n as u64
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.t[a * self.n + b] as usize
    }
}

/// Coset multiplication table of `g` modulo the normal subgroup `n`.
/// Cosets are numbered in discovery order over `g`, so coset 0 is `n`
/// itself.
pub fn quotient_table(g: &Closure, n: &Closure) -> Result<MulTable> {
    if !is_normal(n, g)? {
        return Err(Error::Invalid("quotient by a non-normal subgroup".into()));
    }
    let order = g.order() as usize;
    let n_elems: Vec<CycMatrix> = n.iter().collect();
    const UNASSIGNED: u32 = u32::MAX;
    let mut coset_of = vec![UNASSIGNED; order];
    let mut reps: Vec<CycMatrix> = Vec::new();
    for idx in 0..order {
        if coset_of[idx] != UNASSIGNED {
            continue;
        }
        let rep = g.element(idx);
        let coset = reps.len() as u32;
        for ne in &n_elems {
            let member = rep.mul(ne)?;
            let gi = *g
                .index
                .get(&member.digest())
                .ok_or_else(|| Error::Invalid("subgroup element outside parent group".into()))?
                as usize;
            coset_of[gi] = coset;
        }
        reps.push(rep);
    }
    let k = reps.len();
    let mut t = vec![0u32; k * k];
    for a in 0..k {
        for b in 0..k {
            let prod = reps[a].mul(&reps[b])?;
            let gi = *g.index.get(&prod.digest()).unwrap() as usize;
            t[a * k + b] = coset_of[gi];
        }
    }
    Ok(MulTable { n: k, t })
}

/// Fingerprint of a group given by its multiplication table.
pub fn table_fingerprint(t: &MulTable) -> GroupFingerprint {
    let n = t.n;
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut exponent = 1u64;
    let mut inv = vec![0usize; n];
    for i in 0..n {
        let mut p = i;
        let mut ord = 1u64;
        while p != 0 {
            inv[i] = p;
            p = t.product(p, i);
            ord += 1;
        }
        if i == 0 {
            inv[0] = 0;
        }
        *histogram.entry(ord).or_insert(0) += 1;
        exponent = exponent.lcm(&ord);
    }
    let mut center = 0u64;
    for i in 0..n {
        if (0..n).all(|j| t.product(i, j) == t.product(j, i)) {
            center += 1;
        }
    }
    // Derived subgroup: close the set of all commutators under table
    // products.
    let mut in_derived = vec![false; n];
    let mut derived: Vec<usize> = Vec::new();
    let push = |x: usize, set: &mut Vec<usize>, seen: &mut Vec<bool>| {
        if !seen[x] {
            seen[x] = true;
            set.push(x);
        }
    };
    push(0, &mut derived, &mut in_derived);
    for i in 0..n {
        for j in 0..n {
            let c = t.product(t.product(inv[i], inv[j]), t.product(i, j));
            push(c, &mut derived, &mut in_derived);
        }
    }
    let mut cursor = 0;
    while cursor < derived.len() {
        let a = derived[cursor];
        for k in 0..derived.len() {
            let p = t.product(a, derived[k]);
            if !in_derived[p] {
                in_derived[p] = true;
                derived.push(p);
            }
        }
        cursor += 1;
    }
    let derived_order = derived.len() as u64;
    GroupFingerprint {
        order: n as u64,
        center_order: center,
        derived_order,
        abelianization_order: n as u64 / derived_order,
        exponent,
        order_histogram: histogram,
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

/// Multiplication table of the permutation group generated by `gens`
/// (maps on `0..k`), elements in breadth-first discovery order.
pub fn perm_group_table(gens: &[Vec<usize>]) -> MulTable {
    let k = gens[0].len();
    let identity: Vec<usize> = (0..k).collect();
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
    index.insert(identity, 0);
    let mut cursor = 0;
    while cursor < elems.len() {
        for g in gens {
            let p = compose(&elems[cursor], g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len() as u32);
                elems.push(p);
            }
        }
        cursor += 1;
    }
    let n = elems.len();
    let mut t = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            t[a * n + b] = index[&compose(&elems[a], &elems[b])];
        }
    }
    MulTable { n, t }
}

/// Fingerprints of named comparison groups, realized as permutation
/// groups.
pub fn reference_fingerprint(name: &str) -> Result<GroupFingerprint> {
    let gens: Vec<Vec<usize>> = match name {
        "S4" => vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
        "S6" => vec![vec![1, 0, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 0]],
        "Z2xS4" => vec![vec![1, 0, 2, 3, 4, 5], vec![1, 2, 3, 0, 4, 5], vec![0, 1, 2, 3, 5, 4]],
        "Z4" => vec![vec![1, 2, 3, 0]],
        "Z2" => vec![vec![1, 0]],
        "SL23" => return Ok(table_fingerprint(&sl23_table())),
        _ => return Err(Error::UnknownId(format!("reference group {name}"))),
    };
    Ok(table_fingerprint(&perm_group_table(&gens)))
}

/// SL(2,3) acting by right multiplication on the eight nonzero vectors
/// of F_3^2, as a permutation group.
fn sl23_table() -> MulTable {
    let vectors: Vec<(i32, i32)> = (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .filter(|&(x, y)| x != 0 || y != 0)
        .collect();
    let vector_index = |x: i32, y: i32| -> usize {
        vectors.iter().position(|&(a, b)| (a, b) == (x.rem_euclid(3), y.rem_euclid(3))).unwrap()
    };
    let act = |m: [[i32; 2]; 2]| -> Vec<usize> {
        vectors
            .iter()
            .map(|&(x, y)| vector_index(x * m[0][0] + y * m[1][0], x * m[0][1] + y * m[1][1]))
            .collect()
    };
    let gens = vec![act([[1, 1], [0, 1]]), act([[0, 2], [1, 0]])];
    perm_group_table(&gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycNum;

    fn pauli_gens_one_qubit() -> Vec<CycMatrix> {
        vec![CycMatrix::sigma_x(), CycMatrix::sigma_z()]
    }

    #[test]
    fn one_qubit_pauli_group_has_order_eight() {
        // <X, Z> contains XZ = -ZX, so the scalar -1: order 8.
        let c = closure(&pauli_gens_one_qubit(), 1000).unwrap();
        assert_eq!(c.order(), 8);
        assert!(c.contains(&CycMatrix::identity(2)));
        let minus = CycMatrix::identity(2).scalar_mul(&CycNum::from_int(-1));
        assert!(c.contains(&minus));
    }

    #[test]
    fn cap_is_enforced() {
        let err = match closure(&pauli_gens_one_qubit(), 5) {
            Err(e) => e,
            Ok(_) => panic!("expected CapExceeded"),
        };
        match err {
            Error::CapExceeded { cap } => assert_eq!(cap, 5),
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn codec_roundtrip_dense_and_monomial() {
        let h = hadamard_like();
        let mut buf = Vec::new();
        encode_matrix(&h, &mut buf);
        assert_eq!(decode_matrix(&buf), h);
        // An entry outside Q forces the general codec.
        let mut m = CycMatrix::identity(2);
        m.set(0, 1, CycNum::zeta(1));
        encode_matrix(&m, &mut buf);
        assert_eq!(buf[0], TAG_GENERAL);
        assert_eq!(decode_matrix(&buf), m);
    }

    fn hadamard_like() -> CycMatrix {
        // (1/2) * [[1, 1], [1, -1]] -- rational but non-monomial.
        let half = CycNum::from_ratio(1, 2);
        CycMatrix::from_rows(vec![
            vec![half.clone(), half.clone()],
            vec![half.clone(), &CycNum::zero() - &half],
        ])
        .unwrap()
    }

    #[test]
    fn fingerprint_of_quaternion_group() {
        // <iX, iZ> is the quaternion group Q8.
        let i = CycNum::i();
        let gens = vec![
            CycMatrix::sigma_x().scalar_mul(&i),
            CycMatrix::sigma_z().scalar_mul(&i),
        ];
        let c = closure(&gens, 100).unwrap();
        let fp = fingerprint(&c).unwrap();
        assert_eq!(fp.order, 8);
        assert_eq!(fp.center_order, 2);
        assert_eq!(fp.derived_order, 2);
        assert_eq!(fp.abelianization_order, 4);
        assert_eq!(fp.exponent, 4);
        let hist: Vec<(u64, u64)> = fp.order_histogram.into_iter().collect();
        assert_eq!(hist, vec![(1, 1), (2, 1), (4, 6)]);
    }

    #[test]
    fn quotient_of_pauli_by_center_is_klein() {
        let c = closure(&pauli_gens_one_qubit(), 100).unwrap();
        let minus = CycMatrix::identity(2).scalar_mul(&CycNum::from_int(-1));
        let center = closure(&[minus], 100).unwrap();
        assert!(is_normal(&center, &c).unwrap());
        let q = quotient_table(&c, &center).unwrap();
        let fp = table_fingerprint(&q);
        assert_eq!(fp.order, 4);
        assert_eq!(fp.exponent, 2);
        assert_eq!(fp.abelianization_order, 4);
    }

    #[test]
    fn reference_groups_match_known_data() {
        let s4 = reference_fingerprint("S4").unwrap();
        assert_eq!(s4.order, 24);
        assert_eq!(s4.center_order, 1);
        assert_eq!(s4.derived_order, 12);
        assert_eq!(s4.abelianization_order, 2);
        assert_eq!(s4.exponent, 12);
        assert_eq!(
            s4.order_histogram.clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 9), (3, 8), (4, 6)]
        );

        let s6 = reference_fingerprint("S6").unwrap();
        assert_eq!(s6.order, 720);
        assert_eq!(s6.derived_order, 360);
        assert_eq!(
            s6.order_histogram.clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 75), (3, 80), (4, 180), (5, 144), (6, 240)]
        );

        let z2s4 = reference_fingerprint("Z2xS4").unwrap();
        assert_eq!(z2s4.order, 48);
        assert_eq!(z2s4.center_order, 2);
        assert_eq!(z2s4.derived_order, 12);
        assert_eq!(
            z2s4.order_histogram.clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 19), (3, 8), (4, 12), (6, 8)]
        );

        let sl23 = reference_fingerprint("SL23").unwrap();
        assert_eq!(sl23.order, 24);
        assert_eq!(sl23.center_order, 2);
        assert_eq!(sl23.derived_order, 8);
        assert_eq!(
            sl23.order_histogram.clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]
        );

        let z4 = reference_fingerprint("Z4").unwrap();
        assert_eq!(z4.order, 4);
        assert_eq!(z4.center_order, 4);
        assert_eq!(z4.derived_order, 1);
    }

    #[test]
    fn subgroup_and_normality_checks() {
        let big = closure(&pauli_gens_one_qubit(), 100).unwrap();
        let sub = closure(&[CycMatrix::sigma_x()], 100).unwrap();
        assert!(is_subgroup(&sub, &big));
        // <X> has index 4 but is not normal in <X, Z>? Conjugating X by
        // Z gives -X, outside <X> = {I, X}: not normal.
        assert!(!is_normal(&sub, &big).unwrap());
        let minus = CycMatrix::identity(2).scalar_mul(&CycNum::from_int(-1));
        let center = closure(&[minus], 100).unwrap();
        assert!(is_normal(&center, &big).unwrap());
    }
}
