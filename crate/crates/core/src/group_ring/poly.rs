use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of ℤ[ℤ^m]: finitely many exponent vectors with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    m: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(m: usize) -> Self {
        LaurentPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; m], c)
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, 1)
    }

    pub fn monomial(exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c.into());
        p
    }

    /// The variable `x_j`.
    pub fn var(m: usize, j: usize) -> Self {
        let mut e = vec![0; m];
        e[j] = 1;
        Self::monomial(e, 1)
    }

    /// `x_j − 1`.
    pub fn var_minus_one(m: usize, j: usize) -> Self {
        Self::var(m, j).sub(&Self::one(m))
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(m);
        for (e, c) in terms {
            if e.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "exponent of length {} in a ring with {m} variables",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.m);
        }
        LaurentPoly {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Image under all `x_j ↦ 1`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Rewrites the polynomial in a ring of `total` variables, placing the
    /// current variables at positions `offset..offset+m`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        assert!(offset + self.m <= total);
        LaurentPoly {
            m: total,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut x = vec![0; total];
                    x[offset..offset + self.m].copy_from_slice(e);
                    (x, c.clone())
                })
                .collect(),
        }
    }

    /// Reduction to ℤ[Π ℤ/N_j]: exponents taken modulo the moduli.
    pub fn reduce(&self, moduli: &[u64]) -> Self {
        let mut out = Self::zero(self.m);
        for (e, c) in &self.terms {
            let r: Vec<i64> = e
                .iter()
                .zip(moduli)
                .map(|(&x, &n)| x.rem_euclid(n as i64))
                .collect();
            out.add_term(r, c.clone());
        }
        out
    }

    pub fn coefficient(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn to_f64_terms(&self) -> Vec<(Vec<i64>, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (j, x) in e.iter().enumerate() {
                if *x != 0 {
                    write!(f, "·x{j}^{x}")?;
                }
            }
        }
        Ok(())
    }
}

/// Matrix over ℤ[ℤ^m], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    m: usize,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zeros(m: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            m,
            rows,
            cols,
            entries: vec![LaurentPoly::zero(m); rows * cols],
        }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        let mut out = Self::zeros(m, n, n);
        for i in 0..n {
            out.set(i, i, LaurentPoly::one(m));
        }
        out
    }

    pub fn from_rows(m: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged polynomial matrix".into()));
            }
            for p in row {
                if p.num_vars() != m {
                    return Err(Error::DimensionMismatch("entries over different rings".into()));
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            m,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn neg(&self) -> Self {
        PolyMatrix {
            m: self.m,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(LaurentPoly::neg).collect(),
        }
    }

    pub fn embed(&self, total: usize, offset: usize) -> Self {
        PolyMatrix {
            m: total,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.embed(total, offset)).collect(),
        }
    }

    /// Kronecker product; both factors must live over the same ring.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.m, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    /// Integer matrix of constant entries; `None` unless every entry is constant.
    pub fn to_constant(&self) -> Option<crate::linalg::IntMatrix> {
        let zero = vec![0; self.m];
        let mut out = crate::linalg::IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if p.terms().any(|(e, _)| *e != zero) {
                    return None;
                }
                out[(i, j)] = p.coefficient(&zero);
            }
        }
        Some(out)
    }

    pub fn from_constant(m: usize, a: &crate::linalg::IntMatrix) -> Self {
        let mut out = Self::zeros(m, a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if !a[(i, j)].is_zero() {
                    out.set(i, j, LaurentPoly::constant(m, a[(i, j)].clone()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels() {
        let t = LaurentPoly::var(1, 0);
        let p = t.sub(&LaurentPoly::one(1));
        let q = t.add(&LaurentPoly::one(1));
        let prod = p.mul(&q);
        let t2 = LaurentPoly::monomial(vec![2], 1);
        assert_eq!(prod, t2.sub(&LaurentPoly::one(1)));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.l1_norm(), BigInt::from(2));
        assert_eq!(p.augmentation(), BigInt::zero());
    }

    #[test]
    fn reduction_mod_moduli() {
        let p = LaurentPoly::monomial(vec![-1], 3).add(&LaurentPoly::monomial(vec![2], 1));
        let r = p.reduce(&[3]);
        assert_eq!(r.coefficient(&[2]), BigInt::from(4));
    }

    #[test]
    fn matrix_product() {
        let m = 2;
        let a = PolyMatrix::from_rows(
            m,
            vec![vec![LaurentPoly::var_minus_one(m, 0), LaurentPoly::var_minus_one(m, 1)]],
        )
        .unwrap();
        let b = PolyMatrix::from_rows(
            m,
            vec![vec![LaurentPoly::var_minus_one(m, 1).neg()], vec![LaurentPoly::var_minus_one(m, 0)]],
        )
        .unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
    }
}
