//! Virasoro algebroids: a free module `V2` of finite rank over a commutative
//! algebra `A`, with A-bilinear operations `_(1)`, `_(0~)` and `<,>`, subject to
//! six identities.
//!
//! Operations are stored as A-multilinear tensors on the basis of `V2`, so
//! A-bilinearity holds structurally and the identities only need checking on
//! basis triples.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::frobenius::{CommutativeAlgebra, FrobeniusAlgebra, ShapeError, ValidationReport};
use crate::scalar::{format_scalar, int, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebroidError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("base algebra is not a commutative unital algebra ({} violations)", .0.violations.len())]
    InvalidBase(ValidationReport),
    #[error("not a Frobenius algebra ({} violations)", .0.violations.len())]
    InvalidFrobenius(ValidationReport),
}

/// An element of `V2`, in coordinates `(k, a)` at position `k * dim A + a`,
/// meaning the coefficient of `x_a (x) v_k`.
pub type ModuleElement = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirasoroAlgebroid {
    base: CommutativeAlgebra,
    labels: Vec<String>,
    op1: Vec<ModuleElement>,
    op0t: Vec<ModuleElement>,
    form: Vec<Vec<Scalar>>,
}

impl VirasoroAlgebroid {
    /// `op1[i][j]` and `op0t[i][j]` are elements of `V2`; `form[i][j]` is an
    /// element of `A`.
    pub fn new(
        base: CommutativeAlgebra,
        labels: Vec<String>,
        op1: Vec<Vec<ModuleElement>>,
        op0t: Vec<Vec<ModuleElement>>,
        form: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self, ShapeError> {
        let r = labels.len();
        let da = base.dim();
        if r == 0 {
            return Err(ShapeError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(ShapeError::DuplicateLabel(dup.clone()));
        }
        let flatten = |table: Vec<Vec<Vec<Scalar>>>, what: &'static str, len: usize| {
            shape(what, r, table.len())?;
            let mut out = Vec::with_capacity(r * r);
            for row in table {
                shape(what, r, row.len())?;
                for entry in row {
                    shape(what, len, entry.len())?;
                    out.push(entry);
                }
            }
            Ok::<_, ShapeError>(out)
        };
        Ok(VirasoroAlgebroid {
            op1: flatten(op1, "op1 table", r * da)?,
            op0t: flatten(op0t, "op0t table", r * da)?,
            form: flatten(form, "form table", da)?,
            base,
            labels,
        })
    }

    /// The algebroid `Vir(F)` over the rationals: `x_(1)y = 2xy`, `x_(0~)y = xy`,
    /// `<x, y>` the Frobenius form.
    pub fn from_frobenius(f: &FrobeniusAlgebra) -> Result<Self, AlgebroidError> {
        let report = f.validate();
        if !report.is_valid() {
            return Err(AlgebroidError::InvalidFrobenius(report));
        }
        let d = f.dim();
        let table = |scale: i64| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| f.basis_product(i, j).iter().map(|c| c * int(scale)).collect())
                        .collect()
                })
                .collect()
        };
        let form = (0..d)
            .map(|i| (0..d).map(|j| vec![f.form(i, j).clone()]).collect())
            .collect();
        Ok(VirasoroAlgebroid::new(
            ground_field(),
            f.labels().to_vec(),
            table(2),
            table(1),
            form,
        )?)
    }

    pub fn base(&self) -> &CommutativeAlgebra {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn op1_entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.op1[i * self.rank() + j]
    }

    pub fn op0t_entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.op0t[i * self.rank() + j]
    }

    pub fn form_entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.form[i * self.rank() + j]
    }

    /// Returns a copy with one A-coordinate of `v_i _(0~) v_j` replaced.
    pub fn with_op0t_coefficient(&self, i: usize, j: usize, pos: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        let r = self.rank();
        out.op0t[i * r + j][pos] = value;
        out
    }

    pub fn with_op1_coefficient(&self, i: usize, j: usize, pos: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        let r = self.rank();
        out.op1[i * r + j][pos] = value;
        out
    }

    pub fn with_form_coefficient(&self, i: usize, j: usize, pos: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        let r = self.rank();
        out.form[i * r + j][pos] = value;
        out
    }

    pub fn with_op0t_zeroed(&self) -> Self {
        let mut out = self.clone();
        for entry in &mut out.op0t {
            entry.iter_mut().for_each(|c| *c = Scalar::zero());
        }
        out
    }

    /// `v_i` as a module element (`1_A (x) v_i`).
    pub fn basis_element(&self, i: usize) -> ModuleElement {
        let da = self.base.dim();
        let mut out = vec![Scalar::zero(); self.rank() * da];
        out[i * da..(i + 1) * da].clone_from_slice(self.base.unit());
        out
    }

    fn base_product(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.base.multiply(a, b).expect("coefficients have base dimension")
    }

    /// Applies an A-bilinear operation stored as a basis table.
    fn bilinear<F>(&self, u: &[Scalar], v: &[Scalar], out_len: usize, entry: F) -> Vec<Scalar>
    where
        F: Fn(usize, usize) -> Vec<Scalar>,
    {
        let da = self.base.dim();
        let r = self.rank();
        let mut out = vec![Scalar::zero(); out_len];
        for i in 0..r {
            let ui = &u[i * da..(i + 1) * da];
            if ui.iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..r {
                let vj = &v[j * da..(j + 1) * da];
                if vj.iter().all(Zero::is_zero) {
                    continue;
                }
                let coeff = self.base_product(ui, vj);
                let value = entry(i, j);
                if out_len == da {
                    let p = self.base_product(&coeff, &value);
                    add_into(&mut out, &p);
                } else {
                    for k in 0..r {
                        let p = self.base_product(&coeff, &value[k * da..(k + 1) * da]);
                        add_into(&mut out[k * da..(k + 1) * da], &p);
                    }
                }
            }
        }
        out
    }

    /// `u _(1) v`.
    pub fn op1(&self, u: &[Scalar], v: &[Scalar]) -> ModuleElement {
        let len = self.rank() * self.base.dim();
        self.bilinear(u, v, len, |i, j| self.op1_entry(i, j).to_vec())
    }

    /// `u _(0~) v`.
    pub fn op0t(&self, u: &[Scalar], v: &[Scalar]) -> ModuleElement {
        let len = self.rank() * self.base.dim();
        self.bilinear(u, v, len, |i, j| self.op0t_entry(i, j).to_vec())
    }

    /// `<u, v>`, an element of `A`.
    pub fn pairing(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.bilinear(u, v, self.base.dim(), |i, j| self.form_entry(i, j).to_vec())
    }

    fn evaluate(&self, identity: Identity, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let two = int(2);
        let four = int(4);
        match identity {
            Identity::Op1Symmetry => (self.op1(x, y), self.op1(y, x)),
            Identity::FormSymmetry => (self.pairing(x, y), self.pairing(y, x)),
            Identity::Op1Jacobi => {
                let lhs = self.op1(&self.op1(x, y), z);
                let rhs = combine(&[
                    (int(1), self.op1(x, &self.op1(y, z))),
                    (int(-1), self.op1(y, &self.op1(x, z))),
                    (two, self.op1(&self.op0t(x, z), y)),
                ]);
                (lhs, rhs)
            }
            Identity::Op0tSkew => {
                let lhs = self.op0t(x, y);
                let rhs = combine(&[(int(-1), self.op0t(y, x)), (int(1), self.op1(y, x))]);
                (lhs, rhs)
            }
            Identity::Op0tAssociativity => {
                let lhs = self.op0t(&self.op0t(x, y), z);
                let x0z = self.op0t(x, z);
                let rhs = combine(&[
                    (int(-1), self.op0t(x, &self.op1(y, z))),
                    (int(-1), self.op0t(&x0z, y)),
                    (two, self.op1(&x0z, y)),
                ]);
                (lhs, rhs)
            }
            Identity::Op0tOp1Exchange => (
                self.op1(&self.op0t(x, y), z),
                self.op1(&self.op0t(x, z), y),
            ),
            Identity::FormOp0tExchange => (
                self.pairing(&self.op0t(x, y), z),
                self.pairing(&self.op0t(x, z), y),
            ),
            Identity::FormOp1 => {
                let lhs = self.pairing(&self.op1(x, y), z);
                let rhs = combine(&[
                    (four, self.pairing(&self.op0t(x, z), y)),
                    (int(-1), self.pairing(y, &self.op1(x, z))),
                ]);
                (lhs, rhs)
            }
            Identity::CyclicForm => {
                let cyc = |f: &Trilinear| {
                    combine(&[(int(1), f(x, y, z)), (int(1), f(y, z, x)), (int(1), f(z, x, y))])
                };
                let lhs = cyc(&|a, b, c| self.pairing(&self.op1(a, b), c));
                let rhs = cyc(&|a, b, c| self.pairing(&self.op0t(a, b), c));
                (lhs, combine(&[(two, rhs)]))
            }
            Identity::CyclicProduct => {
                let cyc = |f: &Trilinear| {
                    combine(&[(int(1), f(x, y, z)), (int(1), f(y, z, x)), (int(1), f(z, x, y))])
                };
                let lhs = cyc(&|a, b, c| self.op1(a, &self.op0t(b, c)));
                let rhs = cyc(&|a, b, c| self.op1(a, &self.op1(b, c)));
                (combine(&[(two, lhs)]), rhs)
            }
        }
    }

    /// Evaluates the given identities on all basis tuples of the appropriate
    /// arity. Requires a valid base algebra.
    pub fn check(&self, identities: &[Identity]) -> Result<AxiomReport, AlgebroidError> {
        let base_report = self.base.validate();
        if !base_report.is_valid() {
            return Err(AlgebroidError::InvalidBase(base_report));
        }
        let r = self.rank();
        let basis: Vec<ModuleElement> = (0..r).map(|i| self.basis_element(i)).collect();
        let outcomes = identities
            .par_iter()
            .map(|&identity| {
                let tuples: Vec<Vec<usize>> = match identity.arity() {
                    2 => (0..r).flat_map(|i| (0..r).map(move |j| vec![i, j])).collect(),
                    _ => (0..r)
                        .flat_map(|i| (0..r).flat_map(move |j| (0..r).map(move |k| vec![i, j, k])))
                        .collect(),
                };
                let mut failures: Vec<IdentityWitness> = tuples
                    .par_iter()
                    .filter_map(|t| {
                        let z = t.get(2).map_or(&basis[0], |&k| &basis[k]);
                        let (lhs, rhs) = self.evaluate(identity, &basis[t[0]], &basis[t[1]], z);
                        (lhs != rhs).then(|| IdentityWitness {
                            indices: t.clone(),
                            lhs,
                            rhs,
                        })
                    })
                    .collect();
                failures.sort_by(|a, b| a.indices.cmp(&b.indices));
                IdentityOutcome {
                    identity,
                    checked: tuples.len(),
                    failure_count: failures.len(),
                    first_failure: failures.into_iter().next(),
                }
            })
            .collect();
        Ok(AxiomReport { outcomes })
    }

    /// The six defining identities plus the symmetry of `_(1)` and `<,>`.
    pub fn check_axioms(&self) -> Result<AxiomReport, AlgebroidError> {
        self.check(Identity::DEFINING)
    }

    /// The cyclic-sum consequences of the defining identities.
    pub fn check_corollaries(&self) -> Result<AxiomReport, AlgebroidError> {
        self.check(&[Identity::CyclicForm, Identity::CyclicProduct])
    }
}

/// The rationals as a one-dimensional base algebra with basis label `k`.
pub fn ground_field() -> CommutativeAlgebra {
    CommutativeAlgebra::new(vec!["k".into()], vec![vec![vec![Scalar::one()]]], vec![Scalar::one()])
        .expect("well-shaped")
}

fn shape(what: &'static str, expected: usize, found: usize) -> Result<(), ShapeError> {
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

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn combine(terms: &[(Scalar, Vec<Scalar>)]) -> Vec<Scalar> {
    let len = terms.first().map_or(0, |t| t.1.len());
    let mut out = vec![Scalar::zero(); len];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// A trilinear expression evaluated on coordinate vectors.
type Trilinear<'a> = dyn Fn(&[Scalar], &[Scalar], &[Scalar]) -> Vec<Scalar> + 'a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    Op1Symmetry,
    FormSymmetry,
    /// `(x_(1)y)_(1)z = x_(1)(y_(1)z) - y_(1)(x_(1)z) + 2 (x_(0~)z)_(1)y`
    Op1Jacobi,
    /// `x_(0~)y = -y_(0~)x + y_(1)x`
    Op0tSkew,
    /// `(x_(0~)y)_(0~)z = -x_(0~)(y_(1)z) - (x_(0~)z)_(0~)y + 2 (x_(0~)z)_(1)y`
    Op0tAssociativity,
    /// `(x_(0~)y)_(1)z = (x_(0~)z)_(1)y`
    Op0tOp1Exchange,
    /// `<x_(0~)y, z> = <x_(0~)z, y>`
    FormOp0tExchange,
    /// `<x_(1)y, z> = 4 <x_(0~)z, y> - <y, x_(1)z>`
    FormOp1,
    /// `Cycle <x_(1)y, z> = 2 Cycle <x_(0~)y, z>`
    CyclicForm,
    /// `2 Cycle x_(1)(y_(0~)z) = Cycle x_(1)(y_(1)z)`
    CyclicProduct,
}

impl Identity {
    pub const DEFINING: &'static [Identity] = &[
        Identity::Op1Symmetry,
        Identity::FormSymmetry,
        Identity::Op1Jacobi,
        Identity::Op0tSkew,
        Identity::Op0tAssociativity,
        Identity::Op0tOp1Exchange,
        Identity::FormOp0tExchange,
        Identity::FormOp1,
    ];

    pub fn arity(self) -> usize {
        match self {
            Identity::Op1Symmetry | Identity::FormSymmetry | Identity::Op0tSkew => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Identity::Op1Symmetry => "op1-symmetry",
            Identity::FormSymmetry => "form-symmetry",
            Identity::Op1Jacobi => "op1-jacobi",
            Identity::Op0tSkew => "op0t-symmetric-part",
            Identity::Op0tAssociativity => "op0t-associativity",
            Identity::Op0tOp1Exchange => "op0t-op1-exchange",
            Identity::FormOp0tExchange => "form-op0t-exchange",
            Identity::FormOp1 => "form-op1",
            Identity::CyclicForm => "cyclic-form",
            Identity::CyclicProduct => "cyclic-product",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityWitness {
    pub indices: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub identity: Identity,
    pub checked: usize,
    pub failure_count: usize,
    pub first_failure: Option<IdentityWitness>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn describe(&self, labels: &[String]) -> String {
        match &self.first_failure {
            None => format!("{}: pass ({} tuples)", self.identity, self.checked),
            Some(w) => {
                let names: Vec<&str> = w.indices.iter().map(|&i| labels[i].as_str()).collect();
                let fmt_vec = |v: &[Scalar]| {
                    let parts: Vec<String> = v.iter().map(format_scalar).collect();
                    format!("[{}]", parts.join(" "))
                };
                format!(
                    "{}: FAIL ({} of {} tuples; first at ({}): {} vs {})",
                    self.identity,
                    self.failure_count,
                    self.checked,
                    names.join(", "),
                    fmt_vec(&w.lhs),
                    fmt_vec(&w.rhs)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn outcome(&self, identity: Identity) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.identity == identity)
    }

    pub fn failed(&self, identity: Identity) -> bool {
        self.outcome(identity).is_some_and(|o| !o.passed())
    }

    pub fn total_failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failure_count).sum()
    }
}
