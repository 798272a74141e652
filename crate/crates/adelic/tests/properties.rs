use adelic_core::arith::{gcd, kronecker};
use adelic_core::numberfields::NumberFieldQ;
use adelic_image::cli::parse_primes;
use adelic_image::fixtures;
use adelic_image::schema::{character, NewformJson};
use adelic_image::AppError;
use proptest::prelude::*;

fn kronecker_table(d: i64, m: u64) -> Vec<(u64, u64)> {
    (1..m).filter(|&u| gcd(u, m) == 1).map(|u| (u, u64::from(kronecker(d, u) == -1))).collect()
}

proptest! {
    #[test]
    fn prime_ranges_round_trip(a in 0u64..5000, len in 0u64..5000) {
        prop_assert_eq!(parse_primes(&format!("{a}..{}", a + len)).unwrap(), (a, a + len));
        if len > 0 {
            let reversed = parse_primes(&format!("{}..{}", a + len, a));
            prop_assert!(matches!(reversed, Err(AppError::Usage(_))));
        }
    }

    #[test]
    fn kronecker_tables_are_accepted(idx in 0usize..6) {
        let (d, m) = [(-4i64, 4u64), (-3, 3), (5, 5), (-7, 7), (8, 8), (-15, 15)][idx];
        let k = NumberFieldQ::rationals();
        let c = adelic_image::schema::CharacterJson { modulus: m, order: 2, exps: kronecker_table(d, m), zeta: None };
        let chi = character(&k, &c).unwrap();
        for (u, e) in &c.exps {
            let want = if *e == 0 { k.one() } else { k.from_int(-1) };
            prop_assert_eq!(chi.eval(&k, *u as i64), want);
        }
    }

    #[test]
    fn flipping_one_entry_breaks_multiplicativity(idx in 0usize..4, pos in 0usize..64) {
        let (d, m) = [(5i64, 5u64), (-7, 7), (-15, 15), (13, 13)][idx];
        let mut exps = kronecker_table(d, m);
        // the entry at 1 must stay trivial for any homomorphism, so any flip is detected
        let i = pos % exps.len();
        exps[i].1 ^= 1;
        let c = adelic_image::schema::CharacterJson { modulus: m, order: 2, exps, zeta: None };
        prop_assert!(matches!(character(&NumberFieldQ::rationals(), &c), Err(AppError::Schema(_))));
    }

    #[test]
    fn schema_round_trips_through_serde(idx in 0usize..8, keep in 37usize..200) {
        let (label, text) = fixtures::ALL[idx % fixtures::ALL.len()];
        let mut j = NewformJson::parse(text).unwrap();
        j.ap.truncate(keep);
        let again = NewformJson::parse(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(&again, &j);
        let f = again.into_form().unwrap();
        prop_assert_eq!(f.form.label.as_str(), label);
    }
}
