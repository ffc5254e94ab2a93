//! General vertex operations `u_(n)v`.
//!
//! For `u = L_{-p} x · w` (first PBW factor split off) we have `u = x_(k) w` with
//! `k = 1 - p`, and the iterate formula
//!
//! ```text
//! (x_(k) w)_(n) v = sum_{j>=0} (-1)^j C(k,j) [ x_(k-j) (w_(n+j) v) - (-1)^k w_(k+n-j) (x_(j) v) ]
//! ```
//!
//! reduces everything to generator modes `x_(q) = L_{q-1} x` and vertex
//! operations of the shorter monomial `w`. Both sums are finite on a
//! homogeneous `v`: `w_(s)v` vanishes once its degree would be negative, and
//! `x_(j)v = 0` for `j > deg v + 1`.

use std::sync::Arc;

use num_traits::Zero;

use super::pbw::{add_scaled, Monomial, State, Terms};
use super::{EnvelopeError, VacuumModule};
use crate::scalar::{binomial, sign, Scalar};

impl VacuumModule {
    /// `u_(n)v`. The result has degree `deg u + deg v - n - 1`.
    pub fn field_action(&self, u: &State, n: i64, v: &State) -> Result<State, EnvelopeError> {
        let degree = self.check_degree(u.degree() as i64 + v.degree() as i64 - n - 1)?;
        let mut out = Terms::new();
        for (um, uc) in u.terms() {
            let part = self.field_terms(um, n, v.terms());
            add_scaled(&mut out, &part, uc);
        }
        Ok(State::from_raw(degree, out))
    }

    fn field_terms(&self, u: &Monomial, n: i64, v: &Terms) -> Terms {
        let mut out = Terms::new();
        for (vm, vc) in v {
            add_scaled(&mut out, &self.field_basis(u, n, vm), vc);
        }
        out
    }

    fn field_basis(&self, u: &Monomial, n: i64, v: &Monomial) -> Arc<Terms> {
        if (u.degree() + v.degree()) as i64 - n - 1 < 0 {
            return Arc::new(Terms::new());
        }
        let key = (u.clone(), n, v.clone());
        if let Some(hit) = self.field_cache.read().expect("cache poisoned").get(&key) {
            return Arc::clone(hit);
        }
        let result = Arc::new(self.reconstruct(u, n, v));
        self.field_cache
            .write()
            .expect("cache poisoned")
            .entry(key)
            .or_insert(result)
            .clone()
    }

    fn reconstruct(&self, u: &Monomial, n: i64, v: &Monomial) -> Terms {
        let Some((first, w)) = u.split_first() else {
            let mut out = Terms::new();
            if n == -1 {
                out.insert(v.clone(), Scalar::from_integer(1.into()));
            }
            return out;
        };
        let i = first.index;
        let k = 1 - first.depth as i64;
        let (dw, dv) = (w.degree() as i64, v.degree() as i64);
        let mut out = Terms::new();
        let v_terms: Terms = [(v.clone(), Scalar::from_integer(1.into()))].into();

        for j in 0..=(dw + dv - n - 1).max(-1) {
            let coeff = sign(j) * binomial(k, j as u32);
            let inner = self.field_basis(&w, n + j, v);
            if inner.is_empty() {
                continue;
            }
            add_scaled(&mut out, &self.act_terms(k - j - 1, i, &inner), &coeff);
        }
        for j in 0..=(dv + 1) {
            let coeff = -(sign(k) * sign(j) * binomial(k, j as u32));
            if coeff.is_zero() {
                continue;
            }
            let inner = self.act_terms(j - 1, i, &v_terms);
            if inner.is_empty() {
                continue;
            }
            add_scaled(&mut out, &self.field_terms(&w, k + n - j, &inner), &coeff);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::Factor;
    use super::*;
    use crate::frobenius::{dual_numbers, k_c, truncated_poly};
    use crate::scalar::{int, unit_vector};

    #[test]
    fn generator_products_follow_the_algebra() {
        let f = truncated_poly(3);
        let v = VacuumModule::new(f.clone(), 8).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let x = unit_vector(3, i);
                let y = unit_vector(3, j);
                let (ex, ey) = (v.embed(&x).unwrap(), v.embed(&y).unwrap());
                let xy = f.multiply(&x, &y).unwrap();
                let one = v.field_action(&ex, 1, &ey).unwrap();
                assert_eq!(one, v.embed(&xy).unwrap().scaled(&int(2)));
                let zero = v.field_action(&ex, 0, &ey).unwrap();
                assert_eq!(zero, v.translate(&v.embed(&xy).unwrap()).unwrap());
                assert!(v.field_action(&ex, 2, &ey).unwrap().is_zero());
                let three = v.field_action(&ex, 3, &ey).unwrap();
                assert_eq!(three, State::vacuum().scaled(f.form(i, j)));
            }
        }
    }

    #[test]
    fn vacuum_is_the_identity_field() {
        let v = VacuumModule::new(dual_numbers(int(1)), 8).unwrap();
        let s = v
            .apply_mode(-3, &[int(2), int(-1)], &v.embed(&[int(1), int(5)]).unwrap())
            .unwrap();
        assert_eq!(v.field_action(&State::vacuum(), -1, &s).unwrap(), s);
        for n in [-3, -2, 0, 1, 2] {
            let r = v.field_action(&State::vacuum().scaled(&int(7)), n, &s);
            assert!(r.map_or(true, |r| r.is_zero()), "n = {n}");
        }
    }

    #[test]
    fn creation_part_of_a_field_recovers_the_state() {
        // u_(-1)|0> = u for every basis state u.
        let v = VacuumModule::new(dual_numbers(int(0)), 8).unwrap();
        for degree in 0..=6 {
            for m in v.basis(degree).unwrap() {
                let u = State::monomial(m);
                assert_eq!(v.field_action(&u, -1, &State::vacuum()).unwrap(), u);
            }
        }
    }

    #[test]
    fn grading_law() {
        let v = VacuumModule::new(k_c(int(2)), 10).unwrap();
        let u = State::monomial(Monomial::new(vec![Factor::new(3, 0), Factor::new(2, 0)]).unwrap());
        let w = State::monomial(Monomial::new(vec![Factor::new(2, 0)]).unwrap());
        for n in -1..=6 {
            let r = v.field_action(&u, n, &w).unwrap();
            assert_eq!(r.degree() as i64, 5 + 2 - n - 1);
        }
    }
}
