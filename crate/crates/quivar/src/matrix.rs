//! Exact dense matrices over Q(zeta_24): products, Kronecker products,
//! unitarity checks, determinants, reversed characteristic polynomials and
//! exact kernels. Dimensions stay tiny (at most 8), so classical Gaussian
//! elimination with field inverses is the right tool.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<CycNum>,
}

/// A monomial matrix split into its row-wise permutation and scale parts:
/// row i has its single nonzero entry `scale[i]` in column `col[i]`.
pub struct MonomialForm {
    pub col: Vec<usize>,
    pub scale: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CycMatrix { nrows, ncols, data: vec![CycNum::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, CycNum::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(CycMatrix { nrows, ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(entries: Vec<CycNum>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// The cyclic shift gate X_d: column j maps to row (j+1) mod d.
    pub fn shift(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for j in 0..d {
            m.set((j + 1) % d, j, CycNum::one());
        }
        m
    }

    pub fn sigma_x() -> Self {
        Self::from_rows(vec![
            vec![CycNum::zero(), CycNum::one()],
            vec![CycNum::one(), CycNum::zero()],
        ])
        .unwrap()
    }

    pub fn sigma_y() -> Self {
        Self::from_rows(vec![
            vec![CycNum::zero(), CycNum::i().neg()],
            vec![CycNum::i(), CycNum::zero()],
        ])
        .unwrap()
    }

    pub fn sigma_z() -> Self {
        Self::diagonal(vec![CycNum::one(), CycNum::from_int(-1)])
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = CycMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(CycMatrix { nrows: self.nrows, ncols: self.ncols, data })
    }

    pub fn scalar_mul(&self, s: &CycNum) -> CycMatrix {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        CycMatrix { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn neg(&self) -> CycMatrix {
        self.scalar_mul(&CycNum::from_int(-1))
    }

    pub fn kron(&self, other: &CycMatrix) -> CycMatrix {
        let nrows = self.nrows * other.nrows;
        let ncols = self.ncols * other.ncols;
        let mut out = CycMatrix::zeros(nrows, ncols);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.nrows {
                    for l in 0..other.ncols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.nrows + k, j * other.ncols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> CycNum {
        let mut acc = CycNum::zero();
        for i in 0..self.nrows.min(self.ncols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn pow(&self, e: u64) -> Result<CycMatrix> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("pow of non-square".into()));
        }
        let mut acc = CycMatrix::identity(self.nrows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols && *self == CycMatrix::identity(self.nrows)
    }

    pub fn is_unitary(&self) -> bool {
        self.nrows == self.ncols
            && self
                .mul(&self.conj_transpose())
                .map(|p| p.is_identity())
                .unwrap_or(false)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|e| e.is_real())
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(|e| e.is_rational())
    }

    /// Rows-as-permutation form when every row and column has exactly one
    /// nonzero entry; the closure engine multiplies these in O(n^2).
    pub fn monomial_form(&self) -> Option<MonomialForm> {
        if self.nrows != self.ncols {
            return None;
        }
        let mut col = vec![usize::MAX; self.nrows];
        let mut scale = vec![CycNum::zero(); self.nrows];
        let mut col_used = vec![false; self.ncols];
        for i in 0..self.nrows {
            let mut hit = None;
            for j in 0..self.ncols {
                if !self.get(i, j).is_zero() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(j);
                }
            }
            let j = hit?;
            if col_used[j] {
                return None;
            }
            col_used[j] = true;
            col[i] = j;
            scale[i] = self.get(i, j).clone();
        }
        Some(MonomialForm { col, scale })
    }

    pub fn det(&self) -> Result<CycNum> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("det of non-square".into()));
        }
        let n = self.nrows;
        let mut a = self.data.clone();
        let at = |a: &Vec<CycNum>, i: usize, j: usize| a[i * n + j].clone();
        let mut det = CycNum::one();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !at(&a, r, col).is_zero());
            let Some(p) = pivot_row else {
                return Ok(CycNum::zero());
            };
            if p != col {
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                }
                det = det.neg();
            }
            let pivot = at(&a, col, col);
            det = det.mul(&pivot);
            let pinv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let factor = at(&a, r, col).mul(&pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = at(&a, r, j).sub(&factor.mul(&at(&a, col, j)));
                    a[r * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Coefficients c_0..c_n of det(I - t M), found with the
    /// Faddeev-LeVerrier recurrence; this is the per-element factor of the
    /// Molien sum before inversion.
    pub fn char_rev(&self) -> Result<Vec<CycNum>> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("char poly of non-square".into()));
        }
        let n = self.nrows;
        // det(tI - M) = t^n + a[n-1] t^(n-1) + ... + a[0]
        let mut coeffs = vec![CycNum::zero(); n];
        let mut mk = self.clone();
        for k in 1..=n {
            let ak = mk.trace().mul(&CycNum::from_ratio(-1, k as i64));
            coeffs[n - k] = ak.clone();
            if k < n {
                let mut shifted = mk;
                for i in 0..n {
                    let v = shifted.get(i, i).add(&ak);
                    shifted.set(i, i, v);
                }
                mk = self.mul(&shifted)?;
            }
        }
        // det(I - tM) = t^n * p(1/t) with p = char poly; reversing gives
        // c_k = a[n-k], c_0 = 1.
        let mut out = vec![CycNum::one()];
        for k in 1..=n {
            out.push(coeffs[n - k].clone());
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<CycMatrix> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.nrows;
        let mut aug = CycMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycNum::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        let mut out = CycMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let (nr, nc) = (self.nrows, self.ncols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..nc {
            if row >= nr {
                break;
            }
            let Some(p) = (row..nr).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..nc {
                    let tmp = self.get(p, j).clone();
                    self.set(p, j, self.get(row, j).clone());
                    self.set(row, j, tmp);
                }
            }
            let pinv = self.get(row, col).inv().expect("nonzero pivot");
            for j in col..nc {
                let v = self.get(row, j).mul(&pinv);
                self.set(row, j, v);
            }
            for r in 0..nr {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..nc {
                    let v = self.get(r, j).sub(&factor.mul(self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel { x : M x = 0 }.
    pub fn nullspace(&self) -> Vec<Vec<CycNum>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let nc = self.ncols;
        let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![CycNum::zero(); nc];
            v[f] = CycNum::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// 16-byte truncation of the SHA-256 of the canonical encoding; the
    /// dedup key used throughout the closure engine.
    pub fn digest(&self) -> [u8; 16] {
        let mut bytes = Vec::with_capacity(self.data.len() * 20 + 8);
        bytes.extend_from_slice(&(self.nrows as u32).to_be_bytes());
        bytes.extend_from_slice(&(self.ncols as u32).to_be_bytes());
        for e in &self.data {
            e.canonical_bytes(&mut bytes);
        }
        let hash = Sha256::digest(&bytes);
        let mut out = [0u8; 16];
        out.copy_from_slice(&hash[..16]);
        out
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    pub fn to_complex(&self) -> Vec<num_complex::Complex64> {
        self.data.iter().map(|e| e.to_complex64()).collect()
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            write!(f, "[")?;
            for j in 0..self.ncols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> CycMatrix {
        let h = CycNum::sqrt2().inv().unwrap();
        CycMatrix::from_rows(vec![
            vec![h.clone(), h.clone()],
            vec![h.clone(), h.neg()],
        ])
        .unwrap()
    }

    #[test]
    fn hadamard_is_an_involution_and_unitary() {
        let h = hadamard();
        assert!(h.is_unitary());
        assert!(h.mul(&h).unwrap().is_identity());
    }

    #[test]
    fn shift_gate_has_the_right_order() {
        let x4 = CycMatrix::shift(4);
        assert!(x4.pow(4).unwrap().is_identity());
        assert!(!x4.pow(2).unwrap().is_identity());
        assert_eq!(x4.char_rev().unwrap(), vec![
            CycNum::one(),
            CycNum::zero(),
            CycNum::zero(),
            CycNum::zero(),
            CycNum::from_int(-1),
        ]);
    }

    #[test]
    fn char_rev_of_pauli_x() {
        // det(I - t sigma_x) = 1 - t^2
        assert_eq!(CycMatrix::sigma_x().char_rev().unwrap(), vec![
            CycNum::one(),
            CycNum::zero(),
            CycNum::from_int(-1),
        ]);
    }

    #[test]
    fn kron_matches_pauli_algebra() {
        let zz = CycMatrix::sigma_z().kron(&CycMatrix::sigma_z());
        assert_eq!(*zz.get(3, 3), CycNum::one());
        assert_eq!(*zz.get(1, 1), CycNum::from_int(-1));
        let xy = CycMatrix::sigma_x().mul(&CycMatrix::sigma_y()).unwrap();
        // sigma_x sigma_y = i sigma_z
        assert_eq!(xy, CycMatrix::sigma_z().scalar_mul(&CycNum::i()));
    }

    #[test]
    fn determinant_and_digest_are_stable() {
        let half = CycNum::from_ratio(1, 2);
        let s = CycMatrix::from_rows(
            [[1, -1, 1, 1], [1, 1, -1, 1], [1, -1, -1, -1], [1, 1, 1, -1]]
                .iter()
                .map(|r| r.iter().map(|&v| half.mul(&CycNum::from_int(v))).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(s.det().unwrap(), CycNum::one());
        assert!(s.is_unitary());
        assert_eq!(s.digest(), s.clone().digest());
        assert_ne!(s.digest(), CycMatrix::identity(4).digest());
    }

    #[test]
    fn monomial_form_detection() {
        assert!(CycMatrix::shift(4).monomial_form().is_some());
        assert!(CycMatrix::sigma_y().monomial_form().is_some());
        assert!(hadamard().monomial_form().is_none());
        let m = CycMatrix::diagonal(vec![CycNum::i(), CycNum::one()]);
        let f = m.monomial_form().unwrap();
        assert_eq!(f.col, vec![0, 1]);
    }

    #[test]
    fn nullspace_of_singular_matrix() {
        let m = CycMatrix::from_rows(vec![
            vec![CycNum::one(), CycNum::from_int(2)],
            vec![CycNum::from_int(2), CycNum::from_int(4)],
        ])
        .unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // M * v = 0
        let v = &ns[0];
        let lhs = m.get(0, 0).mul(&v[0]).add(&m.get(0, 1).mul(&v[1]));
        assert!(lhs.is_zero());
        assert_eq!(m.rank(), 1);
    }
}
