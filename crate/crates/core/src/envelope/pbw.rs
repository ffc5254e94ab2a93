//! PBW monomials, homogeneous states, and graded dimensions of the vacuum module.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{format_scalar, Scalar};

/// A creation mode `L_{-depth} (x) x_index`, `depth >= 2`.
///
/// Factors are ordered by decreasing depth, then increasing basis index; a PBW
/// monomial lists its factors in non-decreasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub depth: u32,
    pub index: usize,
}

impl Factor {
    pub fn new(depth: u32, index: usize) -> Self {
        debug_assert!(depth >= 2);
        Factor { depth, index }
    }

    /// The mode number `m = -depth`.
    pub fn mode(&self) -> i64 {
        -(self.depth as i64)
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .depth
            .cmp(&self.depth)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `L_{-n_1} x_{i_1} ... L_{-n_k} x_{i_k} |0>` in PBW order. The empty monomial
/// is the vacuum.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    /// Returns `None` unless the factors have depth at least 2 and are in PBW order.
    pub fn new(factors: Vec<Factor>) -> Option<Self> {
        let ordered = factors.windows(2).all(|w| w[0] <= w[1]);
        (ordered && factors.iter().all(|f| f.depth >= 2)).then_some(Monomial(factors))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.depth).sum()
    }

    /// First factor and the remaining monomial.
    pub fn split_first(&self) -> Option<(Factor, Monomial)> {
        self.0
            .split_first()
            .map(|(f, rest)| (*f, Monomial(rest.to_vec())))
    }

    /// Prepends a factor that sorts no later than the current first factor.
    pub(crate) fn prepend(&self, f: Factor) -> Monomial {
        debug_assert!(self.0.first().is_none_or(|first| f <= *first));
        let mut factors = Vec::with_capacity(self.0.len() + 1);
        factors.push(f);
        factors.extend_from_slice(&self.0);
        Monomial(factors)
    }

    pub fn describe(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "|0>".to_string();
        }
        let mut out = String::new();
        for f in &self.0 {
            out.push_str(&format!("L_{}({})", f.mode(), labels[f.index]));
        }
        out.push_str("|0>");
        out
    }
}

/// Linear combination of monomials, no zero coefficients stored.
pub(crate) type Terms = BTreeMap<Monomial, Scalar>;

pub(crate) fn add_term(terms: &mut Terms, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub(crate) fn add_scaled(terms: &mut Terms, other: &Terms, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (m, v) in other {
        add_term(terms, m.clone(), v * c);
    }
}

/// A homogeneous element of the vacuum module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    degree: u32,
    coeffs: Terms,
}

impl State {
    pub fn zero(degree: u32) -> Self {
        State {
            degree,
            coeffs: Terms::new(),
        }
    }

    pub fn vacuum() -> Self {
        Self::monomial(Monomial::vacuum())
    }

    pub fn monomial(m: Monomial) -> Self {
        let degree = m.degree();
        let mut coeffs = Terms::new();
        coeffs.insert(m, Scalar::one());
        State { degree, coeffs }
    }

    /// Builds a state from terms; every monomial must have the given degree.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut coeffs = Terms::new();
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "inhomogeneous state");
            add_term(&mut coeffs, m, c);
        }
        State { degree, coeffs }
    }

    pub(crate) fn from_raw(degree: u32, coeffs: Terms) -> Self {
        debug_assert!(coeffs.keys().all(|m| m.degree() == degree));
        debug_assert!(coeffs.values().all(|c| !c.is_zero()));
        State { degree, coeffs }
    }

    pub(crate) fn terms(&self) -> &Terms {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn scaled(&self, c: &Scalar) -> State {
        let mut coeffs = Terms::new();
        add_scaled(&mut coeffs, &self.coeffs, c);
        State {
            degree: self.degree,
            coeffs,
        }
    }

    /// `self + c * other`; both must have the same degree.
    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        assert_eq!(self.degree, other.degree, "adding states of different degrees");
        add_scaled(&mut self.coeffs, &other.coeffs, c);
    }

    pub fn plus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn minus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    /// Coordinates with respect to an ordered list of monomials of this degree.
    pub fn coordinates(&self, basis: &[Monomial]) -> Vec<Scalar> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn describe(&self, labels: &[String]) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(m, c)| format!("{} {}", format_scalar(c), m.describe(labels)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self
            .coeffs
            .keys()
            .flat_map(|m| m.factors().iter().map(|f| f.index + 1))
            .max()
            .unwrap_or(0);
        let labels: Vec<String> = (0..max).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.describe(&labels))
    }
}

/// All PBW monomials of the given degree over an algebra of dimension `dim`,
/// in increasing monomial order.
pub fn enumerate_basis(dim: usize, degree: u32) -> Vec<Monomial> {
    fn extend(
        dim: usize,
        remaining: u32,
        prefix: &mut Vec<Factor>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial(prefix.clone()));
            return;
        }
        let (max_depth, last) = match prefix.last() {
            Some(f) => (f.depth.min(remaining), Some(*f)),
            None => (remaining, None),
        };
        for depth in (2..=max_depth).rev() {
            let start = match last {
                Some(f) if f.depth == depth => f.index,
                _ => 0,
            };
            for index in start..dim {
                prefix.push(Factor::new(depth, index));
                extend(dim, remaining - depth, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(dim, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Graded dimension by the partition formula: the sum over partitions of
/// `degree` into parts `>= 2` of `prod_k C(dim + m_k - 1, m_k)`, where `m_k` is
/// the multiplicity of part `k`.
pub fn graded_dimension(dim: usize, degree: u32) -> u128 {
    fn multichoose(n: u128, k: u128) -> u128 {
        // C(n + k - 1, k)
        (0..k).fold(1u128, |acc, i| acc * (n + i) / (i + 1))
    }
    fn partitions(remaining: u32, max_part: u32, mults: &mut Vec<u32>, dim: u128) -> u128 {
        if remaining == 0 {
            return mults
                .iter()
                .filter(|&&m| m > 0)
                .map(|&m| multichoose(dim, m as u128))
                .product();
        }
        let mut total = 0;
        for part in (2..=max_part.min(remaining)).rev() {
            let max_mult = remaining / part;
            for mult in 1..=max_mult {
                let idx = part as usize;
                if mults.len() <= idx {
                    mults.resize(idx + 1, 0);
                }
                mults[idx] = mult;
                total += partitions(remaining - part * mult, part - 1, mults, dim);
                mults[idx] = 0;
            }
        }
        total
    }
    partitions(degree, degree, &mut Vec::new(), dim as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn factor_order_puts_deeper_modes_first() {
        assert!(Factor::new(4, 1) < Factor::new(2, 0));
        assert!(Factor::new(2, 0) < Factor::new(2, 1));
        assert!(Monomial::new(vec![Factor::new(2, 0), Factor::new(3, 0)]).is_none());
        assert!(Monomial::new(vec![Factor::new(3, 0), Factor::new(2, 0)]).is_some());
        assert!(Monomial::new(vec![Factor { depth: 1, index: 0 }]).is_none());
    }

    #[test]
    fn degree_four_bases() {
        let kc = enumerate_basis(1, 4);
        assert_eq!(
            kc,
            vec![
                Monomial(vec![Factor::new(4, 0)]),
                Monomial(vec![Factor::new(2, 0), Factor::new(2, 0)]),
            ]
        );
        let labels = vec!["one".to_string(), "t".to_string()];
        let d: Vec<String> = enumerate_basis(2, 4).iter().map(|m| m.describe(&labels)).collect();
        assert_eq!(
            d,
            [
                "L_-4(one)|0>",
                "L_-4(t)|0>",
                "L_-2(one)L_-2(one)|0>",
                "L_-2(one)L_-2(t)|0>",
                "L_-2(t)L_-2(t)|0>",
            ]
        );
        assert_eq!(enumerate_basis(1, 3), vec![Monomial(vec![Factor::new(3, 0)])]);
        assert!(enumerate_basis(3, 1).is_empty());
        assert_eq!(enumerate_basis(3, 0), vec![Monomial::vacuum()]);
    }

    #[test]
    fn partition_counts() {
        let kc: Vec<u128> = (0..=8).map(|n| graded_dimension(1, n)).collect();
        assert_eq!(kc, [1, 0, 1, 1, 2, 2, 4, 4, 7]);
        let dual: Vec<u128> = (0..=5).map(|n| graded_dimension(2, n)).collect();
        assert_eq!(dual, [1, 0, 2, 2, 5, 6]);
    }

    #[test]
    fn formula_agrees_with_enumeration() {
        for dim in 1..=3 {
            for n in 0..=9 {
                assert_eq!(
                    graded_dimension(dim, n),
                    enumerate_basis(dim, n).len() as u128,
                    "dim {dim} degree {n}"
                );
            }
        }
    }

    #[test]
    fn state_arithmetic_drops_zeros() {
        let m = Monomial(vec![Factor::new(2, 0)]);
        let mut s = State::monomial(m.clone());
        s.add_scaled(&State::monomial(m.clone()), &int(-1));
        assert!(s.is_zero());
        assert_eq!(s.degree(), 2);
        let two = State::monomial(m.clone()).scaled(&int(2));
        assert_eq!(two.coefficient(&m), int(2));
        assert!(two.scaled(&int(0)).is_zero());
    }
}
