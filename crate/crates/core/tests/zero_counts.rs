use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use unimodal::families::{census, fekete, fekete_count, random_selfreciprocal, Family};
use unimodal::oracle::{oracle_count, OracleConfig};
use unimodal::zerocount::{isolator_by_name, nz_general, nz_unimodular, unimodular_count, Route};
use unimodal::{CoeffSet, IntPoly};

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

#[test]
fn small_known_counts() {
    assert_eq!(nz_unimodular(&p(&[1, 1, 1, 1, 1])).unwrap(), 4);
    assert_eq!(nz_unimodular(&p(&[1, 1, 1])).unwrap(), 2);
    assert_eq!(nz_unimodular(&p(&[1, 1, -1, -1, 1])).unwrap(), 0);
    assert_eq!(nz_unimodular(&p(&[1, 1])).unwrap(), 1);
    // (z - 1)^2 (z^2 + 1): roots at 1 (twice), i and -i.
    assert_eq!(nz_unimodular(&p(&[1, -2, 2, -2, 1])).unwrap(), 4);
    // z^2 - 3z + 1 has both roots real and off the circle.
    assert_eq!(nz_unimodular(&p(&[1, -3, 1])).unwrap(), 0);
    assert!(nz_unimodular(&p(&[1, 2, 3])).is_err());
    assert_eq!(nz_general(&p(&[1, 2, 3])).unwrap(), 0);
    assert_eq!(nz_general(&p(&[0, 0, -1, 1])).unwrap(), 1);
}

#[test]
fn leading_zero_shift_is_ignored() {
    let a = nz_unimodular(&p(&[1, 0, 1])).unwrap();
    let b = nz_unimodular(&p(&[0, 0, 0, 1, 0, 1])).unwrap();
    assert_eq!(a, 2);
    assert_eq!(a, b);
}

#[test]
fn skew_family_has_no_unimodular_zeros() {
    let iso = isolator_by_name("auto").unwrap();
    for n in (4..=20).step_by(4) {
        let s = census(Family::SkewReciprocalLittlewood, n, u128::MAX, iso.as_ref()).unwrap();
        assert_eq!(s.max_nz, Some(0), "n = {n}");
        assert_eq!(s.count, 1u128 << (n / 2 + 1));
    }
}

#[test]
fn census_is_consistent_with_its_histogram() {
    let iso = isolator_by_name("auto").unwrap();
    for n in 1..=14 {
        let s = census(Family::SelfReciprocalLittlewood, n, u128::MAX, iso.as_ref()).unwrap();
        assert_eq!(s.histogram.values().sum::<u128>(), s.count);
        let avg = BigRational::new(BigInt::from(s.total_nz()), BigInt::from(s.count));
        assert_eq!(s.avg_nz.as_ref(), Some(&avg));
        // NZ has the parity of the degree.
        assert!(s.histogram.keys().all(|k| k % 2 == n % 2));
        assert_eq!(nz_unimodular(s.argmin.as_ref().unwrap()).unwrap(), s.min_nz.unwrap());
    }
}

#[test]
fn fekete_counts_match_oracle() {
    let iso = isolator_by_name("auto").unwrap();
    for q in [5u64, 7, 11, 13, 17, 29, 31, 37, 41] {
        let c = fekete_count(q, iso.as_ref()).unwrap();
        let o = oracle_count(&fekete(q).unwrap(), &OracleConfig::hundred_digits()).unwrap();
        assert!(o.is_trustworthy());
        assert_eq!(c.nz, o.nz, "p = {q}");
    }
}

#[test]
fn routes_cover_each_shape() {
    let iso = isolator_by_name("auto").unwrap();
    let route = |c: &[i64]| unimodular_count(&p(c), iso.as_ref(), None).unwrap().route;
    assert_eq!(route(&[1, 0, 1]), Route::Cosine);
    assert_eq!(route(&[1, 1]), Route::Lift);
    assert_eq!(route(&[1, 2, -2, -1]), Route::AntiReciprocal);
    assert_eq!(route(&[1, 2, 3]), Route::Product);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isolators_and_oracle_agree(seed in any::<u64>(), n in 1usize..=24) {
        let s = CoeffSet::new([-2, -1, 0, 1, 2]).unwrap();
        let q = random_selfreciprocal(&s, n, seed).unwrap();
        let counts: Vec<usize> = ["sturm", "subdivision"]
            .iter()
            .map(|name| unimodular_count(&q, isolator_by_name(name).unwrap().as_ref(), None).unwrap().nz)
            .collect();
        prop_assert_eq!(counts[0], counts[1]);
        let o = oracle_count(&q, &OracleConfig::hundred_digits()).unwrap();
        prop_assert!(o.is_trustworthy());
        prop_assert_eq!(counts[0], o.nz);
    }

    #[test]
    fn negation_and_reversal_preserve_counts(seed in any::<u64>(), n in 1usize..=20) {
        let s = CoeffSet::new([-3, -1, 0, 2]).unwrap();
        let q = unimodal::families::random_poly(&s, n, seed).unwrap();
        let a = nz_general(&q).unwrap();
        prop_assert_eq!(a, nz_general(&-&q).unwrap());
        prop_assert_eq!(a, nz_general(&q.reversed()).unwrap());
    }
}
