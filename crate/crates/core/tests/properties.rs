use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

use opcong::dissection::{extract, Progression};
use opcong::series::{LaurentSeries, Ring, Valuation};
use opcong::{overpartition_gf, EtaQuotient};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(20_241_019),
        failure_persistence: None,
        ..Config::default()
    }
}

fn coeffs(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, len)
}

fn series(len: std::ops::Range<usize>) -> impl Strategy<Value = LaurentSeries> {
    (coeffs(len), -4i64..=4).prop_map(|(c, off)| LaurentSeries::from_i64s(Ring::EXACT, off, &c))
}

/// Leading coefficient +-1 at the offset.
fn unit_series(len: usize) -> impl Strategy<Value = LaurentSeries> {
    (coeffs(len - 1..len), any::<bool>(), -2i64..=2).prop_map(|(mut c, neg, off)| {
        c[0] = if neg { -1 } else { 1 };
        LaurentSeries::from_i64s(Ring::EXACT, off, &c)
    })
}

fn power_series(len: usize) -> impl Strategy<Value = LaurentSeries> {
    coeffs(len..len + 1).prop_map(|c| LaurentSeries::from_i64s(Ring::EXACT, 0, &c))
}

fn eta_map() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((prop::sample::select(vec![1u64, 2, 3, 4, 6, 8]), -6i64..=6), 0..4)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn mul_commutes_and_valuations_add(a in series(1..40), b in series(1..40)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        if let (Valuation::Finite(va), Valuation::Finite(vb), Valuation::Finite(vab)) =
            (a.valuation(), b.valuation(), ab.valuation())
        {
            prop_assert!(vab >= va + vb);
        }
    }

    #[test]
    fn inverse_is_two_sided(u in unit_series(60)) {
        let inv = u.inverse().unwrap();
        let one = LaurentSeries::one(Ring::EXACT, inv.trunc().min(u.trunc()));
        prop_assert!(inv.mul(&u).unwrap().agrees_through(&one, one.trunc()));
        prop_assert!(u.mul(&inv).unwrap().agrees_through(&one, one.trunc()));
    }

    #[test]
    fn pow_adds_exponents(u in unit_series(101), e1 in -3i64..=3, e2 in -3i64..=3) {
        let lhs = u.pow(e1 + e2).unwrap();
        let rhs = u.pow(e1).unwrap().mul(&u.pow(e2).unwrap()).unwrap();
        let through = lhs.trunc().min(rhs.trunc());
        prop_assert!(lhs.agrees_through(&rhs, through));
    }

    #[test]
    fn reduction_commutes_with_arithmetic(
        a in series(1..101), b in series(1..101), u in unit_series(101), k in 1u32..=8
    ) {
        let ring = Ring::mod2k(k).unwrap();
        let exact = a.mul(&b).unwrap().sub(&u.inverse().unwrap().pow(2).unwrap()).unwrap().scale(3);
        let word = a.reduce(ring).unwrap()
            .mul(&b.reduce(ring).unwrap()).unwrap()
            .sub(&u.reduce(ring).unwrap().inverse().unwrap().pow(2).unwrap()).unwrap()
            .scale(3);
        prop_assert_eq!(exact.reduce(ring).unwrap(), word);
    }

    #[test]
    fn extract_is_linear(a in power_series(120), b in power_series(120), m in 1u64..=9, j in 0u64..9) {
        let p = Progression::new(m, j % m).unwrap();
        let lhs = extract(&a.add(&b).unwrap(), p).unwrap();
        let rhs = extract(&a, p).unwrap().add(&extract(&b, p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn streams_partition_the_series(a in power_series(150), m in prop::sample::select(vec![2u64, 3, 5, 7, 8])) {
        let mut sum = LaurentSeries::zero(Ring::EXACT, 0, a.trunc());
        for j in 0..m {
            let part = extract(&a, Progression::new(m, j).unwrap()).unwrap();
            sum = sum.add(&part.substitute_qpow(m as usize).shift(j as i64)).unwrap();
        }
        prop_assert!(sum.agrees_through(&a, a.trunc()));
    }

    #[test]
    fn extract_undoes_substitution(a in power_series(80), m in 1usize..=8) {
        let back = extract(&a.substitute_qpow(m), Progression::new(m as u64, 0).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn expand_is_multiplicative(x in eta_map(), y in eta_map(), trunc in 1i64..80) {
        let ex = EtaQuotient::from_exponents(x.clone(), 0).unwrap();
        let ey = EtaQuotient::from_exponents(y.clone(), 0).unwrap();
        let joint = ex.times(&ey).expand(Ring::EXACT, trunc).unwrap();
        let separate = ex.expand(Ring::EXACT, trunc).unwrap().mul(&ey.expand(Ring::EXACT, trunc).unwrap()).unwrap();
        prop_assert_eq!(joint, separate);
    }

    #[test]
    fn expand_commutes_with_reduction(x in eta_map(), k in 1u32..=64, trunc in 1i64..80) {
        let q = EtaQuotient::from_exponents(x, 0).unwrap();
        let ring = Ring::mod2k(k).unwrap();
        prop_assert_eq!(q.expand(Ring::EXACT, trunc).unwrap().reduce(ring).unwrap(), q.expand(ring, trunc).unwrap());
    }
}

#[test]
fn overpartition_gf_is_a_power() {
    let base = overpartition_gf(1, Ring::EXACT, 301).unwrap();
    for t in [2u32, 5, 7, 11, 13] {
        assert_eq!(overpartition_gf(t, Ring::EXACT, 301).unwrap(), base.pow(i64::from(t)).unwrap(), "t={t}");
    }
}

#[test]
fn overpartition_counts_positive_and_monotone_in_t() {
    let rows: Vec<Vec<BigInt>> = (1..=13).map(|t| overpartition_gf(t, Ring::EXACT, 120).unwrap().to_bigints()).collect();
    for row in &rows {
        assert!(row.iter().all(|c| c > &BigInt::from(0)));
    }
    for pair in rows.windows(2) {
        assert!(pair[0].iter().zip(&pair[1]).skip(1).all(|(a, b)| a <= b));
    }
}
