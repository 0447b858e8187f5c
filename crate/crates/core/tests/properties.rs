use std::sync::OnceLock;

use num_rational::Rational64;
use proptest::prelude::*;

use crystal_paths::crystals::{build_crystal, Crystal};
use crystal_paths::formulas::{g_closed_form, mu_weight};
use crystal_paths::onedsums::{g_enumerate, GTable};
use crystal_paths::qring::{exact_div, LaurentPoly};
use crystal_paths::tensor::{signature, TensorWord};
use crystal_paths::weights::{AffineType, Family, Weight, WeylElement};

const FAMILIES: [Family; 6] = [
    Family::A1,
    Family::B1,
    Family::D1,
    Family::A2Odd,
    Family::A2Even,
    Family::D2,
];

struct Fixture {
    crystal: Crystal,
    table: GTable,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        FAMILIES
            .iter()
            .map(|&f| {
                let crystal = build_crystal(AffineType::minimal(f));
                let table = GTable::build(&crystal, 3);
                Fixture { crystal, table }
            })
            .collect()
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..6, -3i64..=3), 0..5).prop_map(LaurentPoly::from_terms)
}

/// Reference signature: write the sign string, delete `+-` until none remain.
fn naive_signature(pairs: &[(i64, i64)]) -> (i64, i64, Option<usize>, Option<usize>) {
    let mut s: Vec<(char, usize)> = Vec::new();
    for (k, &(e, p)) in pairs.iter().enumerate() {
        s.extend(std::iter::repeat_n(('-', k), e as usize));
        s.extend(std::iter::repeat_n(('+', k), p as usize));
    }
    while let Some(pos) = s.windows(2).position(|w| w[0].0 == '+' && w[1].0 == '-') {
        s.drain(pos..pos + 2);
    }
    let minus: Vec<usize> = s.iter().filter(|c| c.0 == '-').map(|c| c.1).collect();
    let plus: Vec<usize> = s.iter().filter(|c| c.0 == '+').map(|c| c.1).collect();
    (
        minus.len() as i64,
        plus.len() as i64,
        minus.last().copied(),
        plus.first().copied(),
    )
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &a), &LaurentPoly::zero());
    }

    #[test]
    fn exact_division_inverts_products(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(exact_div(&(&a * &b), &b).unwrap(), a);
    }

    #[test]
    fn shift_and_eval(a in poly(), k in -5i64..5) {
        prop_assert_eq!(a.shift(k).eval_at_one(), a.eval_at_one());
        prop_assert_eq!(a.shift(k).shift(-k), a);
    }

    #[test]
    fn signature_matches_sign_string(pairs in prop::collection::vec((0i64..3, 0i64..3), 0..6)) {
        let s = signature(&pairs);
        prop_assert_eq!((s.eps, s.phi, s.e_at, s.f_at), naive_signature(&pairs));
    }

    #[test]
    fn weyl_words_act_as_reflections(
        f in 0usize..6,
        word in prop::collection::vec(0usize..8, 0..7),
        m in prop::collection::vec(-3i64..=3, 5),
        d in -3i64..=3,
    ) {
        let ty = AffineType::minimal(FAMILIES[f]);
        let cartan = ty.cartan_data();
        let size = cartan.size();
        let word: Vec<usize> = word.into_iter().map(|i| i % size).collect();
        let mu = Weight::classical(m[..size].to_vec()).with_delta(Rational64::from(d));
        let by_matrix = WeylElement::from_word(&cartan, &word).apply(&mu);
        let by_steps = word.iter().fold(mu.clone(), |w, &i| cartan.reflect(i, &w));
        prop_assert_eq!(&by_matrix, &by_steps);
        prop_assert_eq!(cartan.level(&by_matrix), cartan.level(&mu));
        for &i in &word {
            prop_assert_eq!(cartan.reflect(i, &cartan.reflect(i, &mu)), mu.clone());
        }
    }

    #[test]
    fn crystal_operators_invert(f in 0usize..6, b in 0usize..64, i in 0usize..8) {
        let c = &fixtures()[f].crystal;
        let b = b % c.len();
        let i = i % c.size();
        if let Some(b2) = c.f(i, b) {
            prop_assert_eq!(c.e(i, b2), Some(b));
        }
        prop_assert_eq!(c.phi(i, b) - c.eps(i, b), c.wt(b)[i]);
    }

    #[test]
    fn tensor_operators_invert(f in 0usize..6, letters in prop::collection::vec(0usize..64, 1..5), i in 0usize..8) {
        let c = &fixtures()[f].crystal;
        let w = TensorWord::from_right(letters.into_iter().map(|b| b % c.len()).collect());
        let i = i % c.size();
        if let Some(w2) = w.apply_f(c, i) {
            prop_assert_eq!(w2.apply_e(c, i), Some(w.clone()));
            prop_assert_eq!(w2.eps(c, i), w.eps(c, i) + 1);
        }
        prop_assert_eq!(w.phi(c, i) - w.eps(c, i), w.wt(c)[i]);
    }

    #[test]
    fn g_shifts_with_delta(
        f in 0usize..6,
        b in 0usize..64,
        j in 0usize..=3,
        m in prop::collection::vec(-2i64..=2, 5),
        k in -3i64..=3,
    ) {
        let fx = &fixtures()[f];
        let c = &fx.crystal;
        let b = b % c.len();
        let mu = Weight::classical(m[..c.size()].to_vec());
        let g = g_enumerate(c, b, &mu, j);
        prop_assert_eq!(fx.table.g(j, b, &mu.clone().add_delta(Rational64::from(k))), g.shift(k));
    }

    #[test]
    fn closed_form_matches_table(
        f in 0usize..6,
        b in 0usize..64,
        j in 0usize..=3,
        m in prop::collection::vec(-2i64..=2, 5),
    ) {
        let fx = &fixtures()[f];
        let c = &fx.crystal;
        let ty = c.ty();
        let b = b % c.len();
        let params: Vec<i64> = if ty.family == Family::A1 {
            // A1 parameters count letters, so they are nonnegative and sum to j
            let mut p: Vec<i64> = m[..ty.rank + 1].iter().map(|x| x + 2).collect();
            let mut total: i64 = p.iter().sum();
            let mut k = 0;
            while total != j as i64 {
                let step = if total > j as i64 { -1 } else { 1 };
                if p[k] + step >= 0 {
                    p[k] += step;
                    total += step;
                }
                k = (k + 1) % p.len();
            }
            p
        } else {
            m[..ty.rank].to_vec()
        };
        let params = &params[..];
        let w = Weight::classical(mu_weight(ty, params).unwrap());
        prop_assert_eq!(g_closed_form(c, b, params, j).unwrap(), fx.table.g(j, b, &w));
    }
}
