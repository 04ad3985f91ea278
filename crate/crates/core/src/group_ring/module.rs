use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cokernel_structure, smith_with_transforms, CokernelStructure, IntMatrix};

/// `M = coker(presentation)` together with an action of `Π ℤ/orders[j]`,
/// generator `j` acting on presentation generators by `generators_action[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleWithAction {
    presentation: IntMatrix,
    generators_action: Vec<IntMatrix>,
    orders: Vec<u64>,
}

/// Diagonal coordinates `y = U x` in which the relation lattice is `⊕ d_i ℤ`.
struct Diagonalized {
    moduli: Vec<BigInt>,
    actions: Vec<IntMatrix>,
}

impl Diagonalized {
    fn new(presentation: &IntMatrix, actions: &[IntMatrix]) -> Self {
        let g = presentation.rows();
        let s = smith_with_transforms(presentation);
        let u = s.left_transform.expect("transforms");
        let ui = s.left_inverse.expect("transforms");
        let mut moduli = vec![BigInt::zero(); g];
        for (i, d) in s.invariant_factors.iter().enumerate() {
            moduli[i] = d.clone();
        }
        let actions = actions
            .iter()
            .map(|a| u.mul(a).and_then(|x| x.mul(&ui)).expect("square actions"))
            .collect();
        Diagonalized { moduli, actions }
    }

    fn column_in_lattice(&self, m: &IntMatrix, j: usize) -> bool {
        (0..m.rows()).all(|i| {
            let d = &self.moduli[i];
            if d.is_zero() {
                m[(i, j)].is_zero()
            } else {
                m[(i, j)].is_multiple_of(d)
            }
        })
    }

    fn in_lattice(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|j| self.column_in_lattice(m, j))
    }

    /// Reduces every row with a nonzero modulus; valid for lattice-preserving maps.
    fn reduce(&self, m: &mut IntMatrix) {
        for i in 0..m.rows() {
            let d = &self.moduli[i];
            if d.is_zero() || d.is_one() {
                if d.is_one() {
                    for x in m.row_mut(i) {
                        *x = BigInt::zero();
                    }
                }
                continue;
            }
            for x in m.row_mut(i) {
                *x = x.mod_floor(d);
            }
        }
    }

    fn mul_reduced(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let mut p = a.mul(b).expect("square");
        self.reduce(&mut p);
        p
    }

    fn power(&self, a: &IntMatrix, mut e: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(a.rows());
        let mut base = a.clone();
        self.reduce(&mut base);
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_reduced(&result, &base);
            }
            base = self.mul_reduced(&base, &base);
            e >>= 1;
        }
        result
    }
}

impl ModuleWithAction {
    /// Validates that each action descends to `M`, that the actions commute on
    /// `M`, and that action `j` has order dividing `orders[j]` on `M`.
    pub fn new(presentation: IntMatrix, generators_action: Vec<IntMatrix>, orders: Vec<u64>) -> Result<Self> {
        let g = presentation.rows();
        if generators_action.len() != orders.len() {
            return Err(Error::IncompatibleAction(format!(
                "{} actions for {} group generators",
                generators_action.len(),
                orders.len()
            )));
        }
        if let Some(a) = generators_action.iter().find(|a| a.shape() != (g, g)) {
            return Err(Error::IncompatibleAction(format!(
                "action of shape {}x{} on {g} generators",
                a.rows(),
                a.cols()
            )));
        }
        if orders.contains(&0) {
            return Err(Error::IncompatibleAction("group orders must be positive".into()));
        }
        let diag = Diagonalized::new(&presentation, &generators_action);
        let rel = IntMatrix::diagonal(g, g, &diag.moduli);
        for (j, a) in diag.actions.iter().enumerate() {
            if !diag.in_lattice(&a.mul(&rel)?) {
                return Err(Error::IncompatibleAction(format!(
                    "generator {j} does not preserve the relations"
                )));
            }
        }
        for i in 0..diag.actions.len() {
            for j in i + 1..diag.actions.len() {
                let (a, b) = (&diag.actions[i], &diag.actions[j]);
                if !diag.in_lattice(&a.mul(b)?.sub(&b.mul(a)?)?) {
                    return Err(Error::IncompatibleAction(format!(
                        "generators {i} and {j} do not commute"
                    )));
                }
            }
        }
        for (j, a) in diag.actions.iter().enumerate() {
            let p = diag.power(a, orders[j]).sub(&IntMatrix::identity(g))?;
            if !diag.in_lattice(&p) {
                return Err(Error::IncompatibleAction(format!(
                    "generator {j} does not have order dividing {}",
                    orders[j]
                )));
            }
        }
        Ok(ModuleWithAction {
            presentation,
            generators_action,
            orders,
        })
    }

    /// `M` with every generator acting by the identity.
    pub fn trivial(presentation: IntMatrix, orders: Vec<u64>) -> Self {
        let g = presentation.rows();
        let actions = vec![IntMatrix::identity(g); orders.len()];
        ModuleWithAction {
            presentation,
            generators_action: actions,
            orders,
        }
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.presentation
    }

    pub fn generators_action(&self) -> &[IntMatrix] {
        &self.generators_action
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.presentation.rows()
    }

    pub fn structure(&self) -> CokernelStructure {
        cokernel_structure(&self.presentation)
    }

    pub fn is_finite(&self) -> bool {
        self.structure().free_rank == 0
    }

    /// `|M|`, or `None` for infinite `M`.
    pub fn order(&self) -> Option<BigInt> {
        let s = self.structure();
        (s.free_rank == 0).then(|| s.torsion_order())
    }

    pub fn d(&self) -> usize {
        self.structure().d()
    }

    /// True when every generator acts as the identity on `M`.
    pub fn acts_trivially(&self) -> bool {
        let diag = Diagonalized::new(&self.presentation, &self.generators_action);
        let id = IntMatrix::identity(self.num_generators());
        diag.actions
            .iter()
            .all(|a| diag.in_lattice(&a.sub(&id).expect("square")))
    }

    /// Isomorphic module presented by `diag(d_1, …, d_s, 0, …, 0)` with all
    /// `d_i ≥ 2`, actions reduced modulo the relations.
    pub fn simplify(&self) -> ModuleWithAction {
        let diag = Diagonalized::new(&self.presentation, &self.generators_action);
        let keep: Vec<usize> = (0..diag.moduli.len()).filter(|&i| !diag.moduli[i].is_one()).collect();
        let moduli: Vec<BigInt> = keep.iter().map(|&i| diag.moduli[i].clone()).collect();
        let k = keep.len();
        let sub = Diagonalized {
            moduli: moduli.clone(),
            actions: Vec::new(),
        };
        let actions = diag
            .actions
            .iter()
            .map(|a| {
                let mut r = a.select_rows(&keep).select_columns(&keep);
                sub.reduce(&mut r);
                r
            })
            .collect();
        ModuleWithAction {
            presentation: IntMatrix::diagonal(k, k, &moduli),
            generators_action: actions,
            orders: self.orders.clone(),
        }
    }

    /// Diagonal moduli of a simplified module: `d_i ≥ 2` for torsion
    /// generators and `0` for free ones. Only meaningful after `simplify`.
    pub(crate) fn diagonal_moduli(&self) -> Vec<BigInt> {
        (0..self.num_generators()).map(|i| self.presentation[(i, i)].clone()).collect()
    }

    /// Reduction modulo a diagonal presentation, or none.
    fn reducer(&self) -> Diagonalized {
        let moduli = if self.is_diagonal() {
            self.diagonal_moduli()
        } else {
            vec![BigInt::zero(); self.num_generators()]
        };
        Diagonalized {
            moduli,
            actions: Vec::new(),
        }
    }

    /// `A_j − I`, the action of the augmentation-ideal generator `t_j − 1`.
    pub fn augmentation_action(&self, j: usize) -> IntMatrix {
        self.generators_action[j]
            .sub(&IntMatrix::identity(self.num_generators()))
            .expect("square")
    }

    /// `Σ_{s < N_j} A_j^s`, the action of the norm element of generator `j`.
    pub fn norm_action(&self, j: usize) -> IntMatrix {
        let diag = self.reducer();
        let g = self.num_generators();
        let a = &self.generators_action[j];
        let mut power = IntMatrix::identity(g);
        let mut sum = IntMatrix::zeros(g, g);
        for _ in 0..self.orders[j] {
            sum = sum.add(&power).expect("square");
            power = diag.mul_reduced(&power, a);
        }
        diag.reduce(&mut sum);
        sum
    }

    /// `M ⊕ N` for two modules over the same group.
    pub fn direct_sum(&self, other: &ModuleWithAction) -> Result<ModuleWithAction> {
        if self.orders != other.orders {
            return Err(Error::IncompatibleAction("modules over different groups".into()));
        }
        let actions = self
            .generators_action
            .iter()
            .zip(&other.generators_action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Ok(ModuleWithAction {
            presentation: self.presentation.block_diag(&other.presentation),
            generators_action: actions,
            orders: self.orders.clone(),
        })
    }

    /// The same module in the generators `x' = g x`, given `g` and `g⁻¹`.
    pub fn rebase(&self, g: &IntMatrix, g_inv: &IntMatrix) -> Result<ModuleWithAction> {
        let presentation = g.mul(&self.presentation)?;
        let actions = self
            .generators_action
            .iter()
            .map(|a| g.mul(a).and_then(|x| x.mul(g_inv)))
            .collect::<Result<Vec<_>>>()?;
        ModuleWithAction::new(presentation, actions, self.orders.clone())
    }

    /// Rewrites the action in terms of new group generators: new generator
    /// `k` acts as `Π_j A_j^{e[k][j]}`.
    pub fn reparametrize(&self, exponents: &[Vec<u64>], orders: Vec<u64>) -> Result<ModuleWithAction> {
        let g = self.num_generators();
        let diag = self.reducer();
        let mut actions = Vec::with_capacity(exponents.len());
        for e in exponents {
            let mut acc = IntMatrix::identity(g);
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    let p = diag.power(&self.generators_action[j], k);
                    acc = diag.mul_reduced(&acc, &p);
                }
            }
            actions.push(acc);
        }
        ModuleWithAction::new(self.presentation.clone(), actions, orders)
    }

    fn is_diagonal(&self) -> bool {
        let p = &self.presentation;
        p.is_square()
            && (0..p.rows()).all(|i| (0..p.cols()).all(|j| i == j || p[(i, j)].is_zero()))
            && (0..p.rows()).all(|i| !p[(i, i)].is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_on_cyclic_group() {
        let p = IntMatrix::from_rows(&[[5]]);
        let m = ModuleWithAction::new(p.clone(), vec![IntMatrix::from_rows(&[[-1]])], vec![2]).unwrap();
        assert!(!m.acts_trivially());
        assert_eq!(m.order(), Some(BigInt::from(5)));
        let bad = ModuleWithAction::new(p, vec![IntMatrix::from_rows(&[[2]])], vec![2]);
        assert!(matches!(bad, Err(Error::IncompatibleAction(_))));
    }

    #[test]
    fn action_must_preserve_relations() {
        // ℤ ⊕ ℤ/2 with the swap of coordinates does not descend.
        let p = IntMatrix::from_rows(&[[0], [2]]);
        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert!(ModuleWithAction::new(p, vec![swap], vec![2]).is_err());
    }

    #[test]
    fn simplify_removes_units() {
        let p = IntMatrix::from_rows(&[[2, 0], [1, 3]]);
        let m = ModuleWithAction::new(p, vec![IntMatrix::identity(2)], vec![1]).unwrap();
        let s = m.simplify();
        assert_eq!(s.presentation(), &IntMatrix::from_rows(&[[6]]));
        assert!(s.acts_trivially());
    }
}
