use frobenius_virasoro::frobenius::{
    direct_sum, dual_numbers, group_algebra_z2, k_c, truncated_poly, Axiom, Builtin, FrobeniusAlgebra,
};
use frobenius_virasoro::scalar::{int, ratio, unit_vector, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-30i64..=30, 1i64..=7).prop_map(|(p, q)| ratio(p, q))
}

fn vector(d: usize) -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::vec(rational(), d)
}

fn builtins() -> Vec<FrobeniusAlgebra> {
    let mut out: Vec<_> = Builtin::standard().iter().map(Builtin::build).collect();
    out.push(direct_sum(&k_c(int(1)), &dual_numbers(int(0))));
    out.push(k_c(int(0)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn multiply_is_commutative_and_associative(seed in 0usize..8, x in vector(3), y in vector(3), z in vector(3)) {
        let all = builtins();
        let f = &all[seed % all.len()];
        let d = f.dim();
        let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
        let xy = f.multiply(x, y).unwrap();
        prop_assert_eq!(&xy, &f.multiply(y, x).unwrap());
        let left = f.multiply(&xy, z).unwrap();
        let right = f.multiply(x, &f.multiply(y, z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pairing_is_invariant(seed in 0usize..8, x in vector(3), y in vector(3), z in vector(3)) {
        let all = builtins();
        let f = &all[seed % all.len()];
        let d = f.dim();
        let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
        let lhs = f.pairing(&f.multiply(x, y).unwrap(), z).unwrap();
        let rhs = f.pairing(x, &f.multiply(y, z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.pairing(x, y).unwrap(), f.pairing(y, x).unwrap());
    }

    #[test]
    fn parametric_builtins_are_valid(c in rational(), a in rational(), b in rational()) {
        prop_assert!(k_c(c.clone()).validate().is_valid());
        prop_assert!(dual_numbers(a.clone()).validate().is_valid());
        let sum = direct_sum(&k_c(c.clone()), &dual_numbers(b.clone()));
        prop_assert!(sum.validate().is_valid());
        prop_assert_eq!(sum.charge(), c + b);
        prop_assert_eq!(dual_numbers(a.clone()).charge(), a);
    }

    #[test]
    fn unit_is_neutral(seed in 0usize..8, x in vector(3)) {
        let all = builtins();
        let f = &all[seed % all.len()];
        let x = &x[..f.dim()];
        prop_assert_eq!(f.multiply(f.unit(), x).unwrap(), x.to_vec());
    }
}

#[test]
fn catalog_entries_are_valid() {
    for f in builtins() {
        assert!(f.validate().is_valid(), "{:?}", f.labels());
    }
    for m in 1..=5 {
        assert!(truncated_poly(m).validate().is_valid(), "truncated_poly({m})");
    }
}

#[test]
fn multiply_and_pairing_examples() {
    let kc = k_c(int(5));
    assert_eq!(kc.multiply(&[int(1)], &[int(1)]).unwrap(), vec![int(1)]);
    assert_eq!(kc.pairing(&[int(1)], &[int(1)]).unwrap(), int(5));
    assert_eq!(kc.charge(), int(5));

    let d = dual_numbers(int(0));
    let t = unit_vector(2, 1);
    assert_eq!(d.multiply(&t, &t).unwrap(), vec![int(0), int(0)]);
    let one_plus_t = vec![int(1), int(1)];
    assert_eq!(d.multiply(&one_plus_t, &one_plus_t).unwrap(), vec![int(1), int(2)]);
    assert_eq!(d.pairing(&unit_vector(2, 0), &t).unwrap(), int(1));
    assert_eq!(d.pairing(&t, &[int(0), int(0)]).unwrap(), int(0));
    assert_eq!(d.charge(), int(0));

    assert_eq!(direct_sum(&k_c(int(2)), &k_c(int(3))).charge(), int(5));
    assert_eq!(k_c(int(0)).charge(), int(0));
    assert_eq!(direct_sum(&k_c(int(1)), &dual_numbers(int(0))).dim(), 3);
    assert!(multiply_shape_error());
}

fn multiply_shape_error() -> bool {
    dual_numbers(int(0)).multiply(&[int(1)], &[int(1), int(0)]).is_err()
}

#[test]
fn non_invariant_dual_form_is_reported() {
    let broken = dual_numbers(int(0)).with_form_entry(1, 1, int(1));
    let report = broken.validate();
    assert!(!report.is_valid());
    assert!(report.violated(Axiom::FormInvariance));
    assert!(!report.violated(Axiom::FormSymmetry));
    // (t, t, 1): <t t, 1> = 0 against <t, t 1> = <t, t> = 1.
    let w = report
        .violations
        .iter()
        .find(|v| v.indices == [1, 1, 0])
        .expect("witness at (t, t, one)");
    assert_eq!((w.lhs.clone(), w.rhs.clone()), (int(0), int(1)));
    let mut sorted = report.violations.clone();
    sorted.sort_by(|a, b| (a.axiom, &a.indices).cmp(&(b.axiom, &b.indices)));
    assert_eq!(sorted, report.violations);
}

/// Associativity through `multiply` and the trace-functional description of
/// an invariant symmetric form, `b(x, y) = lambda(xy)` with `lambda = b(e, -)`.
fn is_frobenius_by_functional(f: &FrobeniusAlgebra) -> bool {
    let d = f.dim();
    let e = f.unit().to_vec();
    let lambda = |x: &[Scalar]| f.pairing(&e, x).unwrap();
    for i in 0..d {
        let xi = unit_vector(d, i);
        if f.multiply(&e, &xi).unwrap() != xi {
            return false;
        }
        for j in 0..d {
            let xj = unit_vector(d, j);
            let xy = f.multiply(&xi, &xj).unwrap();
            if xy != f.multiply(&xj, &xi).unwrap() || *f.form(i, j) != lambda(&xy) {
                return false;
            }
            for k in 0..d {
                let xk = unit_vector(d, k);
                let left = f.multiply(&xy, &xk).unwrap();
                let right = f.multiply(&xi, &f.multiply(&xj, &xk).unwrap()).unwrap();
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn single_constant_mutations() {
    // Raising one of these constants by 1 yields another Frobenius algebra,
    // e.g. t^2 = 1 in the dual numbers gives Q[t]/(t^2 - 1) with the same form.
    let survivors: &[(&str, [&str; 3])] = &[
        ("dual_numbers(0)", ["t", "t", "one"]),
        ("group_algebra_z2", ["g", "g", "g"]),
        ("truncated_poly(3)", ["t", "t", "t"]),
        ("direct_sum(k_1,dual_numbers(0))", ["r_t", "r_t", "r_one"]),
    ];
    let cases: Vec<(String, FrobeniusAlgebra)> = vec![
        ("k_5".into(), k_c(int(5))),
        ("k_0".into(), k_c(int(0))),
        ("dual_numbers(0)".into(), dual_numbers(int(0))),
        ("dual_numbers(3)".into(), dual_numbers(int(3))),
        ("group_algebra_z2".into(), group_algebra_z2()),
        ("truncated_poly(3)".into(), truncated_poly(3)),
        ("direct_sum(k_1,k_2)".into(), direct_sum(&k_c(int(1)), &k_c(int(2)))),
        ("direct_sum(k_1,dual_numbers(0))".into(), direct_sum(&k_c(int(1)), &dual_numbers(int(0)))),
    ];
    let mut found = Vec::new();
    let mut caught = 0;
    for (name, f) in &cases {
        let d = f.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mutated = f.with_mult_entry(i, j, k, f.mult(i, j, k) + int(1));
                    let valid = mutated.validate().is_valid();
                    assert_eq!(valid, is_frobenius_by_functional(&mutated), "{name} ({i},{j},{k})");
                    if valid {
                        let l = f.labels();
                        found.push((name.clone(), [l[i].clone(), l[j].clone(), l[k].clone()]));
                    } else {
                        caught += 1;
                    }
                }
            }
        }
    }
    let expected: Vec<(String, [String; 3])> = survivors
        .iter()
        .map(|(n, ls)| (n.to_string(), ls.map(String::from)))
        .collect();
    assert_eq!(found, expected);
    let total: usize = cases.iter().map(|(_, f)| f.dim().pow(3)).sum();
    assert_eq!(caught + expected.len(), total);
}

#[test]
fn form_mutations() {
    // Off-diagonal changes break symmetry; diagonal ones are caught exactly when
    // the new form is no longer of the shape lambda(xy).
    for f in builtins() {
        let d = f.dim();
        for i in 0..d {
            for j in 0..d {
                let mutated = f.with_form_entry(i, j, f.form(i, j) + int(1));
                let report = mutated.validate();
                if i != j {
                    assert!(report.violated(Axiom::FormSymmetry));
                }
                assert_eq!(report.is_valid(), is_frobenius_by_functional(&mutated));
            }
        }
    }
    // k_c -> k_(c+1) is the only survivor among the one-dimensional cases.
    assert!(k_c(int(5)).with_form_entry(0, 0, int(6)).validate().is_valid());
    assert!(!dual_numbers(int(0)).with_form_entry(1, 1, int(1)).validate().is_valid());
}

#[test]
fn degenerate_forms_are_accepted() {
    let zero = k_c(int(0));
    assert!(zero.validate().is_valid());
    assert_eq!(zero.form_rank(), 0);
    assert!(!zero.is_nondegenerate());
    assert!(dual_numbers(int(0)).is_nondegenerate());
    assert!(Scalar::zero() == zero.charge());
}
