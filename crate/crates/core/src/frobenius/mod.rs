//! Finite-dimensional commutative Frobenius algebras given by structure constants.
//!
//! An algebra with basis `x_0 .. x_{d-1}` is stored as the dense tensor
//! `c[i][j][k]` with `x_i x_j = sum_k c[i][j][k] x_k`, the coordinates of its unit,
//! and the Gram matrix `b[i][j] = <x_i, x_j>` of the invariant form.

mod catalog;

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{dot, format_scalar, zeros, Scalar};

pub use catalog::{direct_sum, dual_numbers, group_algebra_z2, k_c, truncated_poly, Builtin};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("an algebra needs at least one basis element")]
    Empty,
    #[error("basis label `{0}` is repeated")]
    DuplicateLabel(String),
    #[error("{what} has length {found}, expected {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// A commutative unital algebra over the rationals, by structure constants.
///
/// Construction only checks shapes. The algebra axioms are checked by
/// [`CommutativeAlgebra::validate`], so malformed inputs can still be inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativeAlgebra {
    labels: Vec<String>,
    mult: Vec<Scalar>,
    unit: Vec<Scalar>,
}

impl CommutativeAlgebra {
    pub fn new(
        labels: Vec<String>,
        mult: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Self, ShapeError> {
        let d = labels.len();
        if d == 0 {
            return Err(ShapeError::Empty);
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(ShapeError::DuplicateLabel(label.clone()));
            }
        }
        check_len("product table", d, mult.len())?;
        for row in &mult {
            check_len("product table row", d, row.len())?;
            for entry in row {
                check_len("product", d, entry.len())?;
            }
        }
        check_len("unit", d, unit.len())?;
        Ok(CommutativeAlgebra {
            labels,
            mult: mult.into_iter().flatten().flatten().collect(),
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Structure constant `c[i][j][k]`.
    pub fn mult(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let d = self.dim();
        &self.mult[(i * d + j) * d + k]
    }

    /// Coordinates of `x_i x_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let d = self.dim();
        &self.mult[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, ShapeError> {
        let d = self.dim();
        check_len("left factor", d, x.len())?;
        check_len("right factor", d, y.len())?;
        let mut out = zeros(d);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coeff = xi * yj;
                for (o, c) in out.iter_mut().zip(self.basis_product(i, j)) {
                    *o += &coeff * c;
                }
            }
        }
        Ok(out)
    }

    /// Returns a copy with `c[i][j][k]` replaced.
    pub fn with_mult_entry(&self, i: usize, j: usize, k: usize, value: Scalar) -> Self {
        let d = self.dim();
        let mut out = self.clone();
        out.mult[(i * d + j) * d + k] = value;
        out
    }

    pub fn with_unit(&self, unit: Vec<Scalar>) -> Result<Self, ShapeError> {
        check_len("unit", self.dim(), unit.len())?;
        Ok(CommutativeAlgebra {
            unit,
            ..self.clone()
        })
    }

    /// Checks commutativity, associativity and the unit law.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut violations = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (lhs, rhs) = (self.mult(i, j, k), self.mult(j, i, k));
                    if lhs != rhs {
                        violations.push(AxiomViolation::new(
                            Axiom::Commutativity,
                            vec![i, j, k],
                            lhs.clone(),
                            rhs.clone(),
                        ));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for q in 0..d {
                        let lhs: Scalar = (0..d)
                            .map(|p| self.mult(i, j, p) * self.mult(p, k, q))
                            .sum();
                        let rhs: Scalar = (0..d)
                            .map(|p| self.mult(j, k, p) * self.mult(i, p, q))
                            .sum();
                        if lhs != rhs {
                            violations.push(AxiomViolation::new(
                                Axiom::Associativity,
                                vec![i, j, k, q],
                                lhs,
                                rhs,
                            ));
                        }
                    }
                }
            }
        }
        for j in 0..d {
            for k in 0..d {
                let lhs: Scalar = (0..d).map(|i| &self.unit[i] * self.mult(i, j, k)).sum();
                let rhs = if j == k { Scalar::one() } else { Scalar::zero() };
                if lhs != rhs {
                    violations.push(AxiomViolation::new(Axiom::Unit, vec![j, k], lhs, rhs));
                }
            }
        }
        ValidationReport { violations }
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ShapeError> {
    if expected == found {
        Ok(())
    } else {
        Err(ShapeError::Length {
            what,
            expected,
            found,
        })
    }
}

/// A commutative Frobenius algebra: a commutative unital algebra with a symmetric
/// bilinear form satisfying `<xy, z> = <x, yz>`. The form may be degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    algebra: CommutativeAlgebra,
    form: Vec<Scalar>,
}

impl FrobeniusAlgebra {
    pub fn new(
        labels: Vec<String>,
        mult: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        form: Vec<Vec<Scalar>>,
    ) -> Result<Self, ShapeError> {
        let algebra = CommutativeAlgebra::new(labels, mult, unit)?;
        Self::from_parts(algebra, form)
    }

    pub fn from_parts(
        algebra: CommutativeAlgebra,
        form: Vec<Vec<Scalar>>,
    ) -> Result<Self, ShapeError> {
        let d = algebra.dim();
        check_len("form", d, form.len())?;
        for row in &form {
            check_len("form row", d, row.len())?;
        }
        Ok(FrobeniusAlgebra {
            algebra,
            form: form.into_iter().flatten().collect(),
        })
    }

    pub fn algebra(&self) -> &CommutativeAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn unit(&self) -> &[Scalar] {
        self.algebra.unit()
    }

    pub fn mult(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.algebra.mult(i, j, k)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        self.algebra.basis_product(i, j)
    }

    /// Gram matrix entry `<x_i, x_j>`.
    pub fn form(&self, i: usize, j: usize) -> &Scalar {
        &self.form[i * self.dim() + j]
    }

    pub fn form_matrix(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_rows(
            &(0..d)
                .map(|i| self.form[i * d..(i + 1) * d].to_vec())
                .collect::<Vec<_>>(),
        )
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, ShapeError> {
        self.algebra.multiply(x, y)
    }

    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar, ShapeError> {
        let d = self.dim();
        check_len("left argument", d, x.len())?;
        check_len("right argument", d, y.len())?;
        Ok((0..d)
            .filter(|&i| !x[i].is_zero())
            .map(|i| &x[i] * dot(&self.form[i * d..(i + 1) * d], y))
            .sum())
    }

    /// The charge `<e, e>` of the unit.
    pub fn charge(&self) -> Scalar {
        self.pairing(self.unit(), self.unit())
            .expect("unit has the algebra's dimension")
    }

    /// Rank of the Gram matrix; the form is nondegenerate iff this equals `dim`.
    pub fn form_rank(&self) -> usize {
        self.form_matrix().rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.form_rank() == self.dim()
    }

    pub fn with_mult_entry(&self, i: usize, j: usize, k: usize, value: Scalar) -> Self {
        FrobeniusAlgebra {
            algebra: self.algebra.with_mult_entry(i, j, k, value),
            form: self.form.clone(),
        }
    }

    /// Returns a copy with the single Gram entry `b[i][j]` replaced (not symmetrized).
    pub fn with_form_entry(&self, i: usize, j: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        out.form[i * self.dim() + j] = value;
        out
    }

    pub fn with_unit(&self, unit: Vec<Scalar>) -> Result<Self, ShapeError> {
        Ok(FrobeniusAlgebra {
            algebra: self.algebra.with_unit(unit)?,
            form: self.form.clone(),
        })
    }

    /// Checks all five axiom families. Violations are ordered by family
    /// (commutativity, associativity, unit, symmetry, invariance), then
    /// lexicographically by index tuple.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut report = self.algebra.validate();
        for i in 0..d {
            for j in 0..d {
                if self.form(i, j) != self.form(j, i) {
                    report.violations.push(AxiomViolation::new(
                        Axiom::FormSymmetry,
                        vec![i, j],
                        self.form(i, j).clone(),
                        self.form(j, i).clone(),
                    ));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs: Scalar = (0..d).map(|p| self.mult(i, j, p) * self.form(p, k)).sum();
                    let rhs: Scalar = (0..d).map(|p| self.mult(j, k, p) * self.form(i, p)).sum();
                    if lhs != rhs {
                        report.violations.push(AxiomViolation::new(
                            Axiom::FormInvariance,
                            vec![i, j, k],
                            lhs,
                            rhs,
                        ));
                    }
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Commutativity,
    Associativity,
    Unit,
    FormSymmetry,
    FormInvariance,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::FormSymmetry => "form-symmetry",
            Axiom::FormInvariance => "form-invariance",
        }
    }

    /// Which identity is compared, in terms of the witness indices.
    fn law(self) -> &'static str {
        match self {
            Axiom::Commutativity => "c[i][j][k] = c[j][i][k]",
            Axiom::Associativity => "((x_i x_j) x_k)_q = (x_i (x_j x_k))_q",
            Axiom::Unit => "(e x_j)_k = delta(j,k)",
            Axiom::FormSymmetry => "<x_i,x_j> = <x_j,x_i>",
            Axiom::FormInvariance => "<x_i x_j, x_k> = <x_i, x_j x_k>",
        }
    }
}

/// One failed instance of an axiom: the basis indices involved and the two
/// sides that should have been equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl AxiomViolation {
    fn new(axiom: Axiom, indices: Vec<usize>, lhs: Scalar, rhs: Scalar) -> Self {
        AxiomViolation {
            axiom,
            indices,
            lhs,
            rhs,
        }
    }

    /// Renders the violation with basis labels in place of indices.
    pub fn describe(&self, labels: &[String]) -> String {
        let names: Vec<&str> = self.indices.iter().map(|&i| labels[i].as_str()).collect();
        format!(
            "{} violated at ({}): {} gives {} vs {}",
            self.axiom.name(),
            names.join(", "),
            self.axiom.law(),
            format_scalar(&self.lhs),
            format_scalar(&self.rhs)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for FrobeniusAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frobenius algebra of dimension {} [{}]", self.dim(), self.labels().join(", "))
    }
}
