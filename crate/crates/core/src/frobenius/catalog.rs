//! Built-in Frobenius algebras.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::FrobeniusAlgebra;
use crate::scalar::{format_scalar, int, parse_rational, Scalar};

/// `k_c`: the ground field with `<x, y> = c x y`.
pub fn k_c(charge: Scalar) -> FrobeniusAlgebra {
    FrobeniusAlgebra::new(
        vec!["e".into()],
        vec![vec![vec![Scalar::one()]]],
        vec![Scalar::one()],
        vec![vec![charge]],
    )
    .expect("well-shaped")
}

/// `Q[t]/(t^2)` with Gram matrix `[[a, 1], [1, 0]]` on the basis `(one, t)`.
pub fn dual_numbers(a: Scalar) -> FrobeniusAlgebra {
    let (z, o) = (Scalar::zero, Scalar::one);
    FrobeniusAlgebra::new(
        vec!["one".into(), "t".into()],
        vec![
            vec![vec![o(), z()], vec![z(), o()]],
            vec![vec![z(), o()], vec![z(), z()]],
        ],
        vec![o(), z()],
        vec![vec![a, o()], vec![o(), z()]],
    )
    .expect("well-shaped")
}

/// `Q[t]/(t^m)` on the basis `1, t, .., t^{m-1}` with `<t^i, t^j> = [i + j = m - 1]`.
pub fn truncated_poly(m: usize) -> FrobeniusAlgebra {
    assert!(m >= 1, "truncated_poly needs m >= 1");
    let labels = (0..m)
        .map(|i| match i {
            0 => "one".to_string(),
            1 => "t".to_string(),
            _ => format!("t{i}"),
        })
        .collect();
    let indicator = |b: bool| if b { Scalar::one() } else { Scalar::zero() };
    let mult = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| indicator(i + j == k)).collect())
                .collect()
        })
        .collect();
    let mut unit = vec![Scalar::zero(); m];
    unit[0] = Scalar::one();
    let form = (0..m)
        .map(|i| (0..m).map(|j| indicator(i + j == m - 1)).collect())
        .collect();
    FrobeniusAlgebra::new(labels, mult, unit, form).expect("well-shaped")
}

/// Group algebra of Z/2 on `(one, g)` with the trace form `[[2, 0], [0, 2]]`.
pub fn group_algebra_z2() -> FrobeniusAlgebra {
    let (z, o) = (Scalar::zero, Scalar::one);
    FrobeniusAlgebra::new(
        vec!["one".into(), "g".into()],
        vec![
            vec![vec![o(), z()], vec![z(), o()]],
            vec![vec![z(), o()], vec![o(), z()]],
        ],
        vec![o(), z()],
        vec![vec![int(2), z()], vec![z(), int(2)]],
    )
    .expect("well-shaped")
}

/// Product algebra with the orthogonal sum of the two forms. Labels are
/// prefixed with `l_` and `r_`.
#[allow(clippy::needless_range_loop)] // three-index tables read more clearly by index
pub fn direct_sum(left: &FrobeniusAlgebra, right: &FrobeniusAlgebra) -> FrobeniusAlgebra {
    let (p, q) = (left.dim(), right.dim());
    let d = p + q;
    let labels = left
        .labels()
        .iter()
        .map(|l| format!("l_{l}"))
        .chain(right.labels().iter().map(|l| format!("r_{l}")))
        .collect();
    let mut mult = vec![vec![vec![Scalar::zero(); d]; d]; d];
    let mut form = vec![vec![Scalar::zero(); d]; d];
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                mult[i][j][k] = left.mult(i, j, k).clone();
            }
            form[i][j] = left.form(i, j).clone();
        }
    }
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                mult[p + i][p + j][p + k] = right.mult(i, j, k).clone();
            }
            form[p + i][p + j] = right.form(i, j).clone();
        }
    }
    let unit = left.unit().iter().chain(right.unit()).cloned().collect();
    FrobeniusAlgebra::new(labels, mult, unit, form).expect("well-shaped")
}

/// Names of the built-in algebras, as accepted on the command line:
/// `k_<c>`, `dual_numbers(<a>)`, `truncated_poly(<m>)`, `group_algebra_z2`
/// and `direct_sum(<name>,<name>)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    K(Scalar),
    DualNumbers(Scalar),
    TruncatedPoly(usize),
    GroupAlgebraZ2,
    DirectSum(Box<Builtin>, Box<Builtin>),
}

impl Builtin {
    pub fn build(&self) -> FrobeniusAlgebra {
        match self {
            Builtin::K(c) => k_c(c.clone()),
            Builtin::DualNumbers(a) => dual_numbers(a.clone()),
            Builtin::TruncatedPoly(m) => truncated_poly(*m),
            Builtin::GroupAlgebraZ2 => group_algebra_z2(),
            Builtin::DirectSum(l, r) => direct_sum(&l.build(), &r.build()),
        }
    }

    /// The catalog entries exercised by the verification suite.
    pub fn standard() -> Vec<Builtin> {
        use Builtin::*;
        vec![
            K(int(5)),
            DualNumbers(int(0)),
            DualNumbers(int(3)),
            GroupAlgebraZ2,
            TruncatedPoly(3),
            DirectSum(Box::new(K(int(1))), Box::new(K(int(2)))),
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::K(c) => write!(f, "k_{}", format_scalar(c)),
            Builtin::DualNumbers(a) => write!(f, "dual_numbers({})", format_scalar(a)),
            Builtin::TruncatedPoly(m) => write!(f, "truncated_poly({m})"),
            Builtin::GroupAlgebraZ2 => write!(f, "group_algebra_z2"),
            Builtin::DirectSum(l, r) => write!(f, "direct_sum({l},{r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown built-in algebra `{0}`")]
pub struct UnknownBuiltin(pub String);

impl FromStr for Builtin {
    type Err = UnknownBuiltin;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UnknownBuiltin(s.to_string());
        let s = s.trim();
        if s == "group_algebra_z2" {
            return Ok(Builtin::GroupAlgebraZ2);
        }
        if let Some(c) = s.strip_prefix("k_") {
            return parse_rational(c).map(Builtin::K).ok_or_else(err);
        }
        let (head, args) = s
            .strip_suffix(')')
            .and_then(|body| body.split_once('('))
            .ok_or_else(err)?;
        match head {
            "dual_numbers" => parse_rational(args).map(Builtin::DualNumbers).ok_or_else(err),
            "truncated_poly" => args
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&m| m >= 1)
                .map(Builtin::TruncatedPoly)
                .ok_or_else(err),
            "direct_sum" => {
                let split = top_level_comma(args).ok_or_else(err)?;
                let left = args[..split].parse().map_err(|_| err())?;
                let right = args[split + 1..].parse().map_err(|_| err())?;
                Ok(Builtin::DirectSum(Box::new(left), Box::new(right)))
            }
            _ => Err(err()),
        }
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
