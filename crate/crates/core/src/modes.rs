//! The Lie algebra of modes `L_m (x) x` (`m` an integer, `x` in `F`) plus a
//! central element `K`, with bracket
//!
//! ```text
//! [L_m x, L_n y] = (m - n) L_{m+n} (xy) + delta(m+n, 0) (m^3 - m)/6 <x,y> K
//! ```
//!
//! This is the mode commutator of fields `x(z)` with `x_(0)y = d(xy)`,
//! `x_(1)y = 2xy`, `x_(2)y = 0`, `x_(3)y = <x,y> 1` and `L_m x := x_(m+1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::frobenius::FrobeniusAlgebra;
use crate::scalar::{format_scalar, int, Scalar};

/// Finite linear combination of `L_m (x) x_i` and `K`. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeVector {
    terms: BTreeMap<(i64, usize), Scalar>,
    central: Scalar,
}

impl ModeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(m: i64, i: usize) -> Self {
        let mut v = Self::zero();
        v.add_term(m, i, int(1));
        v
    }

    /// `L_m (x) x` for a coordinate vector `x`.
    pub fn mode(m: i64, x: &[Scalar]) -> Self {
        let mut v = Self::zero();
        for (i, c) in x.iter().enumerate() {
            v.add_term(m, i, c.clone());
        }
        v
    }

    pub fn central_element(c: Scalar) -> Self {
        ModeVector {
            terms: BTreeMap::new(),
            central: c,
        }
    }

    pub fn add_term(&mut self, m: i64, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((m, i)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(m, i));
        }
    }

    pub fn add_scaled(&mut self, other: &ModeVector, c: &Scalar) {
        for (&(m, i), v) in &other.terms {
            self.add_term(m, i, v * c);
        }
        self.central += &other.central * c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, usize, &Scalar)> {
        self.terms.iter().map(|(&(m, i), c)| (m, i, c))
    }

    pub fn coefficient(&self, m: i64, i: usize) -> Scalar {
        self.terms.get(&(m, i)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn scaled(&self, c: &Scalar) -> ModeVector {
        let mut out = ModeVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Bilinear extension of the bracket. `K` is central.
    pub fn bracket(&self, other: &ModeVector, f: &FrobeniusAlgebra) -> ModeVector {
        let mut out = ModeVector::zero();
        for (&(m, i), a) in &self.terms {
            for (&(n, j), b) in &other.terms {
                out.add_scaled(&bracket_basis(f, m, i, n, j), &(a * b));
            }
        }
        out
    }

    pub fn describe(&self, labels: &[String]) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(m, i), c)| format!("{} L_{}({})", format_scalar(c), m, labels[i]))
            .collect();
        if !self.central.is_zero() {
            parts.push(format!("{} K", format_scalar(&self.central)));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ModeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.terms.keys().map(|&(_, i)| i + 1).max().unwrap_or(0))
            .map(|i| format!("x{i}"))
            .collect();
        f.write_str(&self.describe(&labels))
    }
}

/// Coefficient `(m^3 - m) / 6` of the central term.
pub fn central_coefficient(m: i64) -> Scalar {
    int(m * m * m - m) / int(6)
}

/// `[L_m (x) x_i, L_n (x) x_j]`.
pub fn bracket_basis(f: &FrobeniusAlgebra, m: i64, i: usize, n: i64, j: usize) -> ModeVector {
    let mut out = ModeVector::zero();
    let factor = int(m - n);
    if !factor.is_zero() {
        for (k, c) in f.basis_product(i, j).iter().enumerate() {
            out.add_term(m + n, k, &factor * c);
        }
    }
    if m + n == 0 {
        out.central = central_coefficient(m) * f.form(i, j);
    }
    out
}

/// `[L_m (x) x, L_n (x) y]` for coordinate vectors `x` and `y`.
pub fn bracket(f: &FrobeniusAlgebra, (m, x): (i64, &[Scalar]), (n, y): (i64, &[Scalar])) -> ModeVector {
    ModeVector::mode(m, x).bracket(&ModeVector::mode(n, y), f)
}

/// Charge of the unit as a Virasoro vector in the `L_(3)L = c/2` convention.
/// Under `e_(3)e = <e,e> 1` this is twice the Frobenius charge.
pub fn charge_of_virasoro_vector(f: &FrobeniusAlgebra) -> Scalar {
    int(2) * f.charge()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LieLaw {
    Antisymmetry,
    Jacobi,
}

/// A sampled tuple of generators `(m, i)` on which a law fails, with the
/// nonzero residual (`[a,b] + [b,a]`, or the cyclic Jacobi sum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieViolation {
    pub law: LieLaw,
    pub generators: Vec<(i64, usize)>,
    pub residual: ModeVector,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LieReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<LieViolation>,
}

impl LieReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, law: LieLaw) -> usize {
        self.violations.iter().filter(|v| v.law == law).count()
    }
}

/// Checks antisymmetry on all generator pairs and the Jacobi identity on all
/// generator triples with modes in `modes`.
pub fn check_lie(f: &FrobeniusAlgebra, modes: std::ops::RangeInclusive<i64>) -> LieReport {
    let gens: Vec<(i64, usize)> = modes
        .flat_map(|m| (0..f.dim()).map(move |i| (m, i)))
        .collect();
    let br = |a: (i64, usize), b: (i64, usize)| bracket_basis(f, a.0, a.1, b.0, b.1);
    let mut report = LieReport::default();
    for &a in &gens {
        for &b in &gens {
            report.pairs_checked += 1;
            let mut residual = br(a, b);
            residual.add_scaled(&br(b, a), &int(1));
            if !residual.is_zero() {
                report.violations.push(LieViolation {
                    law: LieLaw::Antisymmetry,
                    generators: vec![a, b],
                    residual,
                });
            }
        }
    }
    let one = int(1);
    for &a in &gens {
        for &b in &gens {
            let ab = br(a, b);
            for &c in &gens {
                report.triples_checked += 1;
                let gen = |g: (i64, usize)| ModeVector::generator(g.0, g.1);
                let mut residual = ab.bracket(&gen(c), f);
                residual.add_scaled(&br(b, c).bracket(&gen(a), f), &one);
                residual.add_scaled(&br(c, a).bracket(&gen(b), f), &one);
                if !residual.is_zero() {
                    report.violations.push(LieViolation {
                        law: LieLaw::Jacobi,
                        generators: vec![a, b, c],
                        residual,
                    });
                }
            }
        }
    }
    report
}
