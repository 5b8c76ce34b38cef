//! Three independent routes to the same Newton coefficients: the recursion,
//! the dense confluent Vandermonde solve, and the Hermite tableau applied to
//! a known function.

use proptest::prelude::*;
use rug::Complex;
use varkit::divdiff::oracle::brute_force_hermite;
use varkit::divdiff::{newton_eval, phi_table, restriction_table, Exp, Polynomial, ValueSequence};
use varkit::mp;
use varkit::MultiplicityVariety;

const BITS: u32 = 256;

fn variety_strategy() -> impl Strategy<Value = MultiplicityVariety> {
    prop::collection::vec(((-40i32..40), (-40i32..40), 1u32..4), 1..7).prop_filter_map(
        "distinct nodes",
        |raw| {
            let mut seen = std::collections::HashSet::new();
            let pts: Vec<(Complex, u32)> = raw
                .into_iter()
                .filter(|(a, b, _)| seen.insert((*a, *b)))
                .map(|(a, b, m)| (mp::from_f64(a as f64 / 8.0, b as f64 / 8.0, BITS), m))
                .collect();
            MultiplicityVariety::finite(pts).ok()
        },
    )
}

fn values_strategy(v: &MultiplicityVariety) -> impl Strategy<Value = ValueSequence> {
    let v = v.clone();
    let n = v.total_multiplicity() as usize;
    prop::collection::vec((-1000i32..1000, -1000i32..1000), n).prop_map(move |raw| {
        let mut it = raw.into_iter();
        ValueSequence::from_fn(&v, |_, _| {
            let (a, b) = it.next().unwrap();
            mp::from_f64(a as f64 / 100.0, b as f64 / 100.0, BITS)
        })
        .unwrap()
    })
}

fn max_rel(
    a: &varkit::divdiff::DividedDifferenceTable,
    b: &varkit::divdiff::DividedDifferenceTable,
) -> f64 {
    let scale = a
        .rows()
        .iter()
        .flatten()
        .map(|c| mp::abs(c).to_f64())
        .fold(1.0, f64::max);
    a.rows()
        .iter()
        .flatten()
        .zip(b.rows().iter().flatten())
        .map(|(x, y)| mp::abs(&Complex::with_val(BITS, x - y)).to_f64() / scale)
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_matches_dense_solve(
        (v, w) in variety_strategy().prop_flat_map(|v| { let s = values_strategy(&v); (Just(v), s) })
    ) {
        let q = v.len();
        let fast = phi_table(&v, &w, q, BITS).unwrap();
        let dense = brute_force_hermite(&v, &w, q, BITS).unwrap();
        prop_assert!(max_rel(&fast, &dense) < 1e-40, "deviation {}", max_rel(&fast, &dense));
    }

    #[test]
    fn interpolant_reproduces_values(
        (v, w) in variety_strategy().prop_flat_map(|v| { let s = values_strategy(&v); (Just(v), s) })
    ) {
        let q = v.len();
        let t = phi_table(&v, &w, q, BITS).unwrap();
        for (j, p) in v.points().iter().enumerate() {
            for l in 0..p.mult {
                let got = newton_eval(&v, &t, q, &p.z, l).unwrap();
                let want = w.get(j, l);
                let err = mp::abs(&Complex::with_val(BITS, &got - want)).to_f64();
                prop_assert!(err <= 1e-50 * (1.0 + mp::abs(want).to_f64()));
            }
        }
    }

    #[test]
    fn recursion_matches_tableau_on_exp(v in variety_strategy(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let f = Exp { scale: mp::from_f64(re, im, BITS) };
        let w = ValueSequence::restrict(&f, &v, BITS).unwrap();
        let q = v.len();
        let fast = phi_table(&v, &w, q, BITS).unwrap();
        let tab = restriction_table(&f, &v, q, BITS).unwrap();
        prop_assert!(max_rel(&fast, &tab) < 1e-40);
    }
}

#[test]
fn polynomial_of_lower_degree_has_vanishing_tail() {
    let f = Polynomial {
        coeffs: vec![
            mp::from_f64(1.0, 0.0, BITS),
            mp::from_f64(-2.0, 1.0, BITS),
            mp::from_f64(0.5, 0.0, BITS),
        ],
    };
    let v = MultiplicityVariety::finite(vec![
        (mp::from_f64(0.0, 0.0, BITS), 1),
        (mp::from_f64(1.0, 1.0, BITS), 2),
        (mp::from_f64(-2.0, 0.5, BITS), 2),
    ])
    .unwrap();
    let w = ValueSequence::restrict(&f, &v, BITS).unwrap();
    let t = phi_table(&v, &w, v.len(), BITS).unwrap();
    // Total multiplicity 5, degree 2: coefficients beyond index 2 vanish.
    let flat: Vec<&Complex> = t.rows().iter().flatten().collect();
    for c in &flat[3..] {
        assert!(mp::abs(c).to_f64() < 1e-60);
    }
    assert!(mp::rel_err(flat[2], &f.coeffs[2]) < 1e-60);
}
