//! The vacuum module `V_F`, built degree by degree up to a cutoff.
//!
//! States are combinations of PBW monomials `L_{-n_1} x_{i_1} ... |0>`. Modes act
//! by straightening: `L_m x` is commuted rightward with the mode bracket until
//! it either annihilates the vacuum (`m >= -1`) or lands in PBW position.
//! General vertex operations `u_(n)v` are reconstructed from the modes of the
//! generators.

mod fields;
mod pbw;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::frobenius::{FrobeniusAlgebra, ShapeError, ValidationReport};
use crate::linalg::{Matrix, SolveError};
use crate::modes::bracket_basis;
use crate::scalar::Scalar;

pub use pbw::{enumerate_basis, graded_dimension, Factor, Monomial, State};
use pbw::{add_scaled, add_term, Terms};

pub const DEFAULT_CUTOFF: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("not a Frobenius algebra ({} violations)", .0.violations.len())]
    InvalidAlgebra(ValidationReport),
    #[error("result degree {degree} exceeds the cutoff {cutoff}")]
    CutoffOverflow { degree: i64, cutoff: u32 },
    #[error("result degree {0} is negative")]
    NegativeDegree(i64),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("translation cannot be inverted on degree 2: {0}")]
    Translation(#[from] SolveError),
}

type ModeKey = (i64, usize, Monomial);
type FieldKey = (Monomial, i64, Monomial);

/// `V_F` truncated at a degree cutoff. Results above the cutoff are refused,
/// never truncated.
///
/// Mode actions and vertex operations on basis monomials are memoized. The
/// caches are insert-only and the cached values are pure functions of their
/// keys, so concurrent callers may share one module.
#[derive(Debug)]
pub struct VacuumModule {
    algebra: FrobeniusAlgebra,
    cutoff: u32,
    mode_cache: RwLock<HashMap<ModeKey, Arc<Terms>>>,
    field_cache: RwLock<HashMap<FieldKey, Arc<Terms>>>,
}

/// The algebroid operations read back from inside the envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredOps {
    /// Coordinates of `x_(1)y` in degree 2.
    pub op1: Vec<Scalar>,
    /// Coordinates of the unique `z` in degree 2 with `dz = x_(0)y`.
    pub op0t: Vec<Scalar>,
    /// Coefficient of `|0>` in `x_(3)y`.
    pub form: Scalar,
}

impl VacuumModule {
    pub fn new(algebra: FrobeniusAlgebra, cutoff: u32) -> Result<Self, EnvelopeError> {
        let report = algebra.validate();
        if !report.is_valid() {
            return Err(EnvelopeError::InvalidAlgebra(report));
        }
        Ok(Self::new_unchecked(algebra, cutoff))
    }

    /// Builds the module without validating the algebra. With broken input the
    /// straightening rules no longer define a representation; this is only
    /// useful to show that the checks in [`crate::verify`] detect that.
    pub fn new_unchecked(algebra: FrobeniusAlgebra, cutoff: u32) -> Self {
        VacuumModule {
            algebra,
            cutoff,
            mode_cache: RwLock::new(HashMap::new()),
            field_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.algebra
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    fn check_degree(&self, degree: i64) -> Result<u32, EnvelopeError> {
        if degree < 0 {
            Err(EnvelopeError::NegativeDegree(degree))
        } else if degree > self.cutoff as i64 {
            Err(EnvelopeError::CutoffOverflow {
                degree,
                cutoff: self.cutoff,
            })
        } else {
            Ok(degree as u32)
        }
    }

    fn check_vector(&self, x: &[Scalar]) -> Result<(), ShapeError> {
        if x.len() == self.algebra.dim() {
            Ok(())
        } else {
            Err(ShapeError::Length {
                what: "algebra element",
                expected: self.algebra.dim(),
                found: x.len(),
            })
        }
    }

    /// PBW basis of the given degree, in monomial order.
    pub fn basis(&self, degree: u32) -> Result<Vec<Monomial>, EnvelopeError> {
        self.check_degree(degree as i64)?;
        Ok(enumerate_basis(self.algebra.dim(), degree))
    }

    /// Graded dimension by the closed partition formula.
    pub fn dim(&self, degree: u32) -> Result<u128, EnvelopeError> {
        self.check_degree(degree as i64)?;
        Ok(graded_dimension(self.algebra.dim(), degree))
    }

    /// `L_{-2} (x) x |0>`, the image of `x` in degree 2.
    pub fn embed(&self, x: &[Scalar]) -> Result<State, EnvelopeError> {
        self.check_vector(x)?;
        self.check_degree(2)?;
        Ok(State::from_terms(
            2,
            x.iter()
                .enumerate()
                .map(|(i, c)| (Monomial::vacuum().prepend(Factor::new(2, i)), c.clone())),
        ))
    }

    /// `(L_m (x) x) v`, in PBW normal form.
    pub fn apply_mode(&self, m: i64, x: &[Scalar], v: &State) -> Result<State, EnvelopeError> {
        self.check_vector(x)?;
        let degree = self.check_degree(v.degree() as i64 - m)?;
        let mut out = Terms::new();
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            add_scaled(&mut out, &self.act_terms(m, i, v.terms()), c);
        }
        Ok(State::from_raw(degree, out))
    }

    /// The translation operator `d = L_{-1} (x) e`.
    pub fn translate(&self, v: &State) -> Result<State, EnvelopeError> {
        let unit = self.algebra.unit().to_vec();
        self.apply_mode(-1, &unit, v)
    }

    /// Matrix of `d` from degree `from` to degree `from + 1`, on PBW bases.
    pub fn translation_matrix(&self, from: u32) -> Result<Matrix, EnvelopeError> {
        let source = self.basis(from)?;
        let target = self.basis(from + 1)?;
        let columns = source
            .into_iter()
            .map(|m| Ok(self.translate(&State::monomial(m))?.coordinates(&target)))
            .collect::<Result<Vec<_>, EnvelopeError>>()?;
        Ok(Matrix::from_columns(&columns, target.len()))
    }

    /// Reads `x_(1)y`, `d^{-1}(x_(0)y)` and `x_(3)y` back out of the module.
    pub fn recovered_ops(&self, x: &[Scalar], y: &[Scalar]) -> Result<RecoveredOps, EnvelopeError> {
        let (u, v) = (self.embed(x)?, self.embed(y)?);
        let degree2 = self.basis(2)?;
        let degree3 = self.basis(3)?;
        let op1 = self.field_action(&u, 1, &v)?.coordinates(&degree2);
        let x0y = self.field_action(&u, 0, &v)?.coordinates(&degree3);
        let op0t = self.translation_matrix(2)?.solve(&x0y)?;
        let form = self
            .field_action(&u, 3, &v)?
            .coefficient(&Monomial::vacuum());
        Ok(RecoveredOps { op1, op0t, form })
    }

    /// `(L_m (x) x_i)` applied to a combination of monomials.
    pub(crate) fn act_terms(&self, m: i64, i: usize, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (mono, c) in terms {
            add_scaled(&mut out, &self.act_basis(m, i, mono), c);
        }
        out
    }

    /// `(L_m (x) x_i) mono`, no cutoff applied.
    pub(crate) fn act_basis(&self, m: i64, i: usize, mono: &Monomial) -> Arc<Terms> {
        let key = (m, i, mono.clone());
        if let Some(hit) = self.mode_cache.read().expect("cache poisoned").get(&key) {
            return Arc::clone(hit);
        }
        let result = Arc::new(self.straighten(m, i, mono));
        self.mode_cache
            .write()
            .expect("cache poisoned")
            .entry(key)
            .or_insert(result)
            .clone()
    }

    fn straighten(&self, m: i64, i: usize, mono: &Monomial) -> Terms {
        let mut out = Terms::new();
        let Some((first, rest)) = mono.split_first() else {
            if m <= -2 {
                out.insert(Monomial::vacuum().prepend(Factor::new((-m) as u32, i)), Scalar::one());
            }
            return out;
        };
        if m <= -2 {
            let f = Factor::new((-m) as u32, i);
            if f <= first {
                out.insert(mono.prepend(f), Scalar::one());
                return out;
            }
        }
        // L_m x A R = A (L_m x R) + [L_m x, A] R
        let inner = self.act_basis(m, i, &rest);
        add_scaled(&mut out, &self.act_terms(first.mode(), first.index, &inner), &Scalar::one());
        let commutator = bracket_basis(&self.algebra, m, i, first.mode(), first.index);
        for (mode, k, c) in commutator.terms() {
            add_scaled(&mut out, &self.act_basis(mode, k, &rest), c);
        }
        add_term(&mut out, rest, commutator.central().clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{dual_numbers, k_c};
    use crate::scalar::{int, unit_vector};

    fn mono(factors: &[(u32, usize)]) -> Monomial {
        Monomial::new(factors.iter().map(|&(d, i)| Factor::new(d, i)).collect()).unwrap()
    }

    #[test]
    fn creation_modes_are_sorted() {
        let v = VacuumModule::new(k_c(int(3)), 8).unwrap();
        let e = [int(1)];
        let l2 = State::monomial(mono(&[(2, 0)]));
        // L_{-3} L_{-2}|0> is already in PBW order.
        let out = v.apply_mode(-3, &e, &l2).unwrap();
        assert_eq!(out, State::monomial(mono(&[(3, 0), (2, 0)])));
        // L_{-2} L_{-3}|0> = L_{-3} L_{-2}|0> + [L_{-2}, L_{-3}]|0> = ... + L_{-5}|0>.
        let l3 = State::monomial(mono(&[(3, 0)]));
        let out = v.apply_mode(-2, &e, &l3).unwrap();
        let expected = State::from_terms(
            5,
            [(mono(&[(3, 0), (2, 0)]), int(1)), (mono(&[(5, 0)]), int(1))],
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn l2_on_embedded_generator_gives_the_form() {
        let f = dual_numbers(int(3));
        let v = VacuumModule::new(f.clone(), 8).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = unit_vector(2, i);
                let y = unit_vector(2, j);
                let out = v.apply_mode(2, &x, &v.embed(&y).unwrap()).unwrap();
                assert_eq!(out.degree(), 0);
                assert_eq!(out.coefficient(&Monomial::vacuum()), f.form(i, j).clone());
            }
        }
    }

    #[test]
    fn non_negative_modes_kill_the_vacuum() {
        let v = VacuumModule::new(dual_numbers(int(0)), 8).unwrap();
        let x = vec![int(1), int(1)];
        assert!(v.apply_mode(-1, &x, &State::vacuum()).unwrap().is_zero());
        assert!(v.apply_mode(0, &x, &State::vacuum()).unwrap().is_zero());
        assert!(v.apply_mode(1, &x, &State::vacuum()).is_err());
        let l2 = v.embed(&x).unwrap();
        assert!(v.apply_mode(1, &x, &State::zero(3)).unwrap().is_zero());
        assert!(v.apply_mode(1, &x, &l2).unwrap().degree() == 1);
        assert!(v.apply_mode(1, &x, &l2).unwrap().is_zero());
    }

    #[test]
    fn translation_examples() {
        let v = VacuumModule::new(k_c(int(1)), 8).unwrap();
        let l2 = State::monomial(mono(&[(2, 0)]));
        assert_eq!(v.translate(&l2).unwrap(), State::monomial(mono(&[(3, 0)])));
        assert!(v.translate(&State::vacuum()).unwrap().is_zero());
        let twice = v.translate(&v.translate(&l2).unwrap()).unwrap();
        assert_eq!(twice, State::monomial(mono(&[(4, 0)])).scaled(&int(2)));
    }

    #[test]
    fn cutoff_is_enforced() {
        let v = VacuumModule::new(k_c(int(1)), 4).unwrap();
        let l4 = State::monomial(mono(&[(4, 0)]));
        assert_eq!(
            v.translate(&l4),
            Err(EnvelopeError::CutoffOverflow { degree: 5, cutoff: 4 })
        );
        assert!(v.basis(5).is_err());
        assert!(matches!(
            v.apply_mode(3, &[int(1)], &State::monomial(mono(&[(2, 0)]))),
            Err(EnvelopeError::NegativeDegree(-1))
        ));
    }

    #[test]
    fn embed_is_linear() {
        let v = VacuumModule::new(dual_numbers(int(0)), 8).unwrap();
        let s = v.embed(&[int(1), int(1)]).unwrap();
        assert_eq!(
            s,
            State::from_terms(2, [(mono(&[(2, 0)]), int(1)), (mono(&[(2, 1)]), int(1))])
        );
        assert!(v.embed(&[int(0), int(0)]).unwrap().is_zero());
        assert!(v.embed(&[int(1)]).is_err());
    }

    #[test]
    fn invalid_algebras_are_rejected() {
        let broken = dual_numbers(int(0)).with_form_entry(1, 1, int(1));
        assert!(matches!(
            VacuumModule::new(broken, 6),
            Err(EnvelopeError::InvalidAlgebra(_))
        ));
    }
}
