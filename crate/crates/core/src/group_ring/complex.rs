use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::module::ModuleWithAction;
use super::poly::PolyMatrix;
use crate::chain::{alpha_degree, alpha_from_harmonic, AlphaDegree, IntChainComplex};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, kernel_lattice, IntMatrix, Lattice};

/// Based free chain complex over ℤ[ℤ^m]; `c_n` is a `dims[n−1] × dims[n]`
/// matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentChainComplex {
    m: usize,
    dims: Vec<usize>,
    differentials: Vec<PolyMatrix>,
}

impl LaurentChainComplex {
    pub fn new(m: usize, dims: Vec<usize>, differentials: Vec<PolyMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex {
                degree: 0,
                reason: "a complex needs at least degree 0".into(),
            });
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex {
                degree: differentials.len(),
                reason: format!("{} dims but {} differentials", dims.len(), differentials.len()),
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            let n = k + 1;
            if d.num_vars() != m {
                return Err(Error::InvalidComplex {
                    degree: n,
                    reason: format!("entries in {} variables, expected {m}", d.num_vars()),
                });
            }
            if (d.rows(), d.cols()) != (dims[n - 1], dims[n]) {
                return Err(Error::InvalidComplex {
                    degree: n,
                    reason: format!(
                        "differential is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        dims[n - 1],
                        dims[n]
                    ),
                });
            }
        }
        for n in 1..differentials.len() {
            if !differentials[n - 1].mul(&differentials[n])?.is_zero() {
                return Err(Error::InvalidComplex {
                    degree: n + 1,
                    reason: format!("c_{} · c_{} is not zero", n, n + 1),
                });
            }
        }
        Ok(LaurentChainComplex { m, dims, differentials })
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// `c_n` for `1 ≤ n ≤ top`.
    pub fn differential(&self, n: usize) -> Result<&PolyMatrix> {
        if n == 0 || n > self.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: n,
                top: self.top_degree(),
            });
        }
        Ok(&self.differentials[n - 1])
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.differentials
    }

    /// Tensor product over ℤ; the result lives over `m + other.m` variables,
    /// with this complex's variables first. Same signs and ordering as
    /// [`IntChainComplex::tensor`].
    pub fn tensor(&self, other: &Self) -> Self {
        let total = self.m + other.m;
        let (ta, tb) = (self.top_degree(), other.top_degree());
        let top = ta + tb;
        let block = |n: usize| -> Vec<(usize, usize, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            for p in 0..=n.min(ta) {
                let q = n - p;
                if q > tb {
                    continue;
                }
                out.push((p, q, off));
                off += self.dim(p) * other.dim(q);
            }
            out
        };
        let dims: Vec<usize> = (0..=top)
            .map(|n| block(n).iter().map(|&(p, q, _)| self.dim(p) * other.dim(q)).sum())
            .collect();
        let mut diffs = Vec::with_capacity(top);
        for n in 1..=top {
            let mut mat = PolyMatrix::zeros(total, dims[n - 1], dims[n]);
            let targets = block(n - 1);
            let offset_of = |p: usize| targets.iter().find(|t| t.0 == p).map(|t| t.2);
            for (p, q, src) in block(n) {
                if p >= 1 {
                    let tgt = offset_of(p - 1).expect("target block exists");
                    let c = self.differentials[p - 1].embed(total, 0);
                    let piece = c.kron(&PolyMatrix::identity(total, other.dim(q)));
                    place(&mut mat, &piece, tgt, src);
                }
                if q >= 1 {
                    let tgt = offset_of(p).expect("target block exists");
                    let d = other.differentials[q - 1].embed(total, self.m);
                    let mut piece = PolyMatrix::identity(total, self.dim(p)).kron(&d);
                    if p % 2 == 1 {
                        piece = piece.neg();
                    }
                    place(&mut mat, &piece, tgt, src);
                }
            }
            diffs.push(mat);
        }
        LaurentChainComplex {
            m: total,
            dims,
            differentials: diffs,
        }
    }
}

fn place(m: &mut PolyMatrix, piece: &PolyMatrix, row_off: usize, col_off: usize) {
    for i in 0..piece.rows() {
        for j in 0..piece.cols() {
            let v = piece.get(i, j);
            if !v.is_zero() {
                let s = m.get(row_off + i, col_off + j).add(v);
                m.set(row_off + i, col_off + j, s);
            }
        }
    }
}

/// The finite quotient `Π ℤ/N_j` of `ℤ^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientSpec {
    moduli: Vec<u64>,
}

impl QuotientSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidArgument("quotient moduli must be positive".into()));
        }
        Ok(QuotientSpec { moduli })
    }

    /// `ℤ^m / (Nℤ)^m`.
    pub fn uniform(m: usize, n: u64) -> Result<Self> {
        Self::new(vec![n; m])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn num_vars(&self) -> usize {
        self.moduli.len()
    }

    pub fn index(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// Position of a group element in the lexicographic order, first
    /// coordinate most significant.
    pub fn linear_index(&self, g: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&x, &n) in g.iter().zip(&self.moduli) {
            idx = idx * n as usize + x.rem_euclid(n as i64) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut g = vec![0; self.moduli.len()];
        for j in (0..self.moduli.len()).rev() {
            let n = self.moduli[j] as usize;
            g[j] = (idx % n) as i64;
            idx /= n;
        }
        g
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.index() as usize).map(|i| self.element(i))
    }

    /// True when this quotient factors through `other`, i.e. `N′_j | N_j`.
    pub fn refines(&self, other: &QuotientSpec) -> bool {
        self.moduli.len() == other.moduli.len()
            && self.moduli.iter().zip(&other.moduli).all(|(&n, &k)| n % k == 0)
    }
}

/// A permutation of basis vectors: `images[k]` is the image of `e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); v.len()];
        for (k, x) in v.iter().enumerate() {
            out[self.images[k]] = x.clone();
        }
        out
    }

    pub fn apply_columns(&self, m: &IntMatrix) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = m.columns().iter().map(|c| self.apply(c)).collect();
        IntMatrix::from_columns(m.rows(), &cols)
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut p = IntMatrix::zeros(self.len(), self.len());
        for (k, &i) in self.images.iter().enumerate() {
            p[(i, k)] = BigInt::from(1);
        }
        p
    }
}

/// `C[i]_* = ℤ[Π ℤ/N_j] ⊗ C_*` as a ℤ-complex, together with the deck action:
/// `actions[n][j]` is generator `j` acting on `C[i]_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientComplex {
    pub complex: IntChainComplex,
    pub actions: Vec<Vec<Permutation>>,
    pub quotient: QuotientSpec,
}

/// Integer matrix of `d` acting on `ℤ[Π ℤ/N_j]^cols`, with the basis order of [`base_change`].
pub fn regular_representation(d: &PolyMatrix, q: &QuotientSpec) -> IntMatrix {
    let idx = q.index() as usize;
    let elements: Vec<Vec<i64>> = q.elements().collect();
    let mut big = IntMatrix::zeros(d.rows() * idx, d.cols() * idx);
    for r in 0..d.rows() {
        for col in 0..d.cols() {
            let p = d.get(r, col).reduce(q.moduli());
            for (h, a) in p.terms() {
                for (gi, g) in elements.iter().enumerate() {
                    let hg: Vec<i64> = h.iter().zip(g).map(|(x, y)| x + y).collect();
                    big[(r * idx + q.linear_index(&hg), col * idx + gi)] += a;
                }
            }
        }
    }
    big
}

/// Expands each entry through the regular representation. Basis vector
/// `e_b ⊗ g` of `C[i]_n` has index `b·index + linear_index(g)`, and
/// `a·h` sends `e_c ⊗ g` to `a·e_r ⊗ (h+g)`.
pub fn base_change(c: &LaurentChainComplex, q: &QuotientSpec) -> Result<QuotientComplex> {
    if q.num_vars() != c.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "quotient of ℤ^{} applied to a complex over ℤ^{}",
            q.num_vars(),
            c.num_vars()
        )));
    }
    let idx = q.index() as usize;
    let elements: Vec<Vec<i64>> = q.elements().collect();
    let dims: Vec<usize> = c.dims().iter().map(|&d| d * idx).collect();
    let diffs = c.differentials().iter().map(|d| regular_representation(d, q)).collect();
    let complex = IntChainComplex::new(dims, diffs)?;
    let actions = c
        .dims()
        .iter()
        .map(|&d| {
            (0..q.num_vars())
                .map(|j| {
                    let mut images = Vec::with_capacity(d * idx);
                    for b in 0..d {
                        for g in &elements {
                            let mut s = g.clone();
                            s[j] += 1;
                            images.push(b * idx + q.linear_index(&s));
                        }
                    }
                    Permutation { images }
                })
                .collect()
        })
        .collect();
    Ok(QuotientComplex {
        complex,
        actions,
        quotient: q.clone(),
    })
}

impl QuotientComplex {
    /// True when the deck action fixes every harmonic vector of degree `n`,
    /// i.e. acts trivially on `ℚ ⊗ H_n`.
    pub fn rationally_trivial_action(&self, n: usize) -> bool {
        let cn = self.complex.boundary(n);
        let cn1 = self.complex.boundary(n + 1);
        let stacked = cn.vstack(&cn1.transpose()).expect("same column count");
        let harmonic = kernel_basis(&stacked);
        self.actions[n]
            .iter()
            .all(|p| p.apply_columns(&harmonic) == harmonic)
    }

    /// `ℤ ⊗_{ℤG} C[i]`, which is the base change of `C` to the trivial group.
    pub fn coinvariants(&self) -> IntChainComplex {
        let idx = self.quotient.index() as usize;
        let c = &self.complex;
        let dims: Vec<usize> = c.dims().iter().map(|&d| d / idx).collect();
        let diffs = (1..=c.top_degree())
            .map(|n| {
                let section: Vec<usize> = (0..dims[n]).map(|b| b * idx).collect();
                let cn = c.differential(n).expect("in range").select_columns(&section);
                self.fibre_projection(n - 1).mul(&cn).expect("shapes agree")
            })
            .collect();
        IntChainComplex::new(dims, diffs).expect("coinvariants of a complex")
    }

    /// `pr_n: C[i]_n → ℤ ⊗_{ℤG} C[i]_n`, summing each fibre `e_b ⊗ g ↦ e_b`.
    pub fn fibre_projection(&self, n: usize) -> IntMatrix {
        let idx = self.quotient.index() as usize;
        let d = self.complex.dim(n) / idx;
        let mut p = IntMatrix::zeros(d, d * idx);
        for b in 0..d {
            for g in 0..idx {
                p[(b, b * idx + g)] = BigInt::one();
            }
        }
        p
    }

    /// `ln det α_n` of `C[i]`. When `b_n(C[i]) = b_n(ℤ ⊗_{ℤG} C[i])` the deck
    /// action on rational homology is trivial, every harmonic vector is
    /// invariant, and the harmonic space is the pullback `prᵀ` of the
    /// harmonic space downstairs; otherwise the full harmonic space is used.
    pub fn alpha_degree(&self, n: usize, betti_q: usize, coinvariants: &IntChainComplex) -> AlphaDegree {
        let below = coinvariants
            .boundary(n)
            .vstack(&coinvariants.boundary(n + 1).transpose())
            .expect("same column count");
        let kh = kernel_basis(&below);
        if kh.cols() == betti_q {
            let lifted = self.fibre_projection(n).transpose().mul(&kh).expect("shapes agree");
            alpha_from_harmonic(&self.complex, n, &lifted)
        } else {
            alpha_degree(&self.complex, n)
        }
    }

    /// `H_n(C[i])` with the induced deck action, in simplified form.
    pub fn homology_with_action(&self, n: usize) -> Result<ModuleWithAction> {
        if n > self.complex.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: n,
                top: self.complex.top_degree(),
            });
        }
        let cycles = kernel_lattice(&self.complex.boundary(n));
        let lat = Lattice::from_generators(&cycles);
        let rel = lat
            .coordinate_matrix(&self.complex.boundary(n + 1))
            .ok_or_else(|| Error::identity("boundaries are cycles", format!("degree {n}")))?;
        let mut actions = Vec::with_capacity(self.actions[n].len());
        for p in &self.actions[n] {
            let a = lat
                .coordinate_matrix(&p.apply_columns(lat.basis()))
                .ok_or_else(|| Error::identity("deck action preserves cycles", format!("degree {n}")))?;
            actions.push(a);
        }
        let module = ModuleWithAction::new(rel, actions, self.quotient.moduli().to_vec())?;
        Ok(module.simplify())
    }
}

/// `H_n(C[i])` of `ℤ[Π ℤ/N_j] ⊗ C` together with its deck action.
pub fn homology_with_action(c: &LaurentChainComplex, q: &QuotientSpec, n: usize) -> Result<ModuleWithAction> {
    base_change(c, q)?.homology_with_action(n)
}

/// `Σ_entries Σ |coefficients|`. Each group element acts isometrically on
/// ℓ², so this bounds the operator norm of every base change of `d`.
pub fn operator_norm_bound(d: &PolyMatrix) -> f64 {
    let total: BigInt = d.entries().iter().map(|p| p.l1_norm()).sum();
    total.to_f64().unwrap_or(f64::INFINITY)
}
