//! q-multinomial closed forms for `g_j(b, mu)` at level 1, and a checker
//! against the path enumeration.
//!
//! Level-0 weights are parametrised by integers `mu_1 .. mu_n` (for type
//! `A_n^(1)`: `mu_0 .. mu_n` with `sum = j`), and every formula sums over
//! letter multiplicities `gamma_b` with `gamma_i - gamma_ibar = mu_i`.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::crystals::{build_crystal, Crystal, Label, Letter};
use crate::error::{Error, Result};
use crate::onedsums::{g_enumerate_all, GTable};
use crate::qring::{exact_div, qfactorial, qmultinomial, LaurentPoly};
use crate::weights::{AffineType, Family};

/// Which `s` enters the `-gamma_s gamma_sbar` term of the `B` and `D`
/// formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SChoice {
    /// `s = n` above `0`, `s = 1` below (for `D`: barred vs unbarred).
    Auto,
    N,
    One,
}

fn letter(crystal: &Crystal, l: Letter) -> usize {
    crystal
        .index_of(&Label::Letter(l))
        .expect("letter of the level-1 alphabet")
}

/// The printed dictionary from parameters to classical `Lambda`
/// coordinates.
pub fn mu_weight(ty: AffineType, mu: &[i64]) -> Result<Vec<i64>> {
    let n = ty.rank;
    let want = if ty.family == Family::A1 { n + 1 } else { n };
    if mu.len() != want {
        return Err(Error::WeightShape {
            got: mu.len(),
            expected: want,
        });
    }
    let mut w = vec![0i64; n + 1];
    if ty.family == Family::A1 {
        // (mu_n - mu_0) L0 + (mu_0 - mu_1) L1 + .. + (mu_{n-1} - mu_n) Ln
        for k in 0..=n {
            w[k] = mu[(k + n) % (n + 1)] - mu[k];
        }
        return Ok(w);
    }
    // mu[i - 1] holds mu_i
    let m = |i: usize| mu[i - 1];
    for k in 1..n {
        w[k] = m(k) - m(k + 1);
    }
    match ty.family {
        Family::B1 => {
            w[0] = -m(1) - m(2);
            w[n] = 2 * m(n);
        }
        Family::D1 => {
            w[0] = -m(1) - m(2);
            w[n] = m(n - 1) + m(n);
        }
        Family::A2Odd => {
            w[0] = -m(1) - m(2);
            w[n] = m(n);
        }
        Family::A2Even => {
            w[0] = -m(1);
            w[n] = 2 * m(n);
        }
        Family::D2 => {
            w[0] = -2 * m(1);
            w[n] = 2 * m(n);
        }
        Family::A1 => unreachable!(),
    }
    Ok(w)
}

/// All `gamma` (indexed by crystal element) with `gamma_i - gamma_ibar = mu_i`
/// and total `j`.
fn gammas(crystal: &Crystal, mu: &[i64], j: i64) -> Vec<Vec<i64>> {
    let n = crystal.ty().rank;
    let pairs: Vec<(usize, usize)> = (1..=n as u32)
        .map(|i| (letter(crystal, Letter::Num(i)), letter(crystal, Letter::Bar(i))))
        .collect();
    let free: Vec<usize> = crystal
        .elements()
        .filter(|&b| matches!(crystal.label(b), Label::Letter(Letter::Num(0) | Letter::Phi)))
        .collect();
    let base: i64 = mu.iter().sum();
    let mut out = Vec::new();
    let mut gamma = vec![0i64; crystal.len()];
    fn rec(
        k: usize,
        left: i64,
        pairs: &[(usize, usize)],
        mu: &[i64],
        free: &[usize],
        gamma: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == pairs.len() {
            // distribute the rest over the free letters
            match free.len() {
                0 if left == 0 => out.push(gamma.clone()),
                0 => {}
                1 => {
                    gamma[free[0]] = left;
                    out.push(gamma.clone());
                    gamma[free[0]] = 0;
                }
                _ => {
                    for a in 0..=left {
                        gamma[free[0]] = a;
                        gamma[free[1]] = left - a;
                        out.push(gamma.clone());
                    }
                    gamma[free[0]] = 0;
                    gamma[free[1]] = 0;
                }
            }
            return;
        }
        let (i, ib) = pairs[k];
        let mut t = (-mu[k]).max(0);
        while 2 * t <= left {
            gamma[i] = mu[k] + t;
            gamma[ib] = t;
            rec(k + 1, left - 2 * t, pairs, mu, free, gamma, out);
            t += 1;
        }
        gamma[i] = 0;
        gamma[ib] = 0;
    }
    if j - base >= 0 {
        rec(0, j - base, &pairs, mu, &free, &mut gamma, &mut out);
    }
    out
}

/// `g_j(b, mu)` from its closed form.
pub fn g_closed_form(crystal: &Crystal, b: usize, mu: &[i64], j: usize) -> Result<LaurentPoly> {
    g_closed_form_with(crystal, b, mu, j, SChoice::Auto)
}

pub fn g_closed_form_with(
    crystal: &Crystal,
    b: usize,
    mu: &[i64],
    j: usize,
    s: SChoice,
) -> Result<LaurentPoly> {
    let ty = crystal.ty();
    if crystal.classical_only() || crystal.level() != 1 {
        return Err(Error::Domain("closed forms cover the level-1 crystals only".into()));
    }
    mu_weight(ty, mu)?;
    let n = ty.rank as u32;
    let j = j as i64;
    let linear = |gamma: &[i64]| -> i64 {
        gamma
            .iter()
            .enumerate()
            .map(|(i, g)| crystal.energy(b, i) * g)
            .sum()
    };
    let half_sq = |gamma: &[i64], skip: &dyn Fn(usize) -> bool| -> i64 {
        gamma
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip(*i))
            .map(|(_, g)| g * (g - 1))
            .sum::<i64>()
    };
    let is_free = |i: usize| matches!(crystal.label(i), Label::Letter(Letter::Num(0) | Letter::Phi));
    let never = |_: usize| false;

    if ty.family == Family::A1 {
        let e = half_sq(mu, &never) / 2 + linear(mu);
        return Ok(qmultinomial(j, mu, 1)?.shift(e));
    }

    let mut total = LaurentPoly::zero();
    match ty.family {
        Family::B1 | Family::D1 => {
            let s_letter = match s {
                SChoice::N => n,
                SChoice::One => 1,
                SChoice::Auto => {
                    let above = match crystal.label(b) {
                        Label::Letter(Letter::Bar(_)) => Some(true),
                        Label::Letter(Letter::Num(0)) => None,
                        _ => Some(false),
                    };
                    match above {
                        Some(true) => n,
                        Some(false) => 1,
                        None => n,
                    }
                }
            };
            let (si, sb) = (letter(crystal, Letter::Num(s_letter)), letter(crystal, Letter::Bar(s_letter)));
            for g in gammas(crystal, mu, j) {
                let e = half_sq(&g, &never) / 2 - g[si] * g[sb] + linear(&g);
                total += &qmultinomial(j, &g, 1)?.shift(e);
            }
        }
        Family::A2Even => {
            for g in gammas(crystal, mu, j) {
                let e = half_sq(&g, &is_free) / 2 + linear(&g);
                total += &qmultinomial(j, &g, 1)?.shift(e);
            }
        }
        Family::D2 => {
            for g in gammas(crystal, mu, j) {
                let e = half_sq(&g, &is_free) + linear(&g);
                total += &qmultinomial(j, &g, 2)?.shift(e);
            }
        }
        Family::A2Odd => {
            let (one, one_bar) = (letter(crystal, Letter::Num(1)), letter(crystal, Letter::Bar(1)));
            let plain_g = matches!(crystal.label(b), Label::Letter(Letter::Num(1) | Letter::Bar(1)));
            for g in gammas(crystal, mu, j) {
                let (g1, g1b) = (g[one], g[one_bar]);
                let s = g1 + g1b;
                let e = half_sq(&g, &never) / 2 - g1 * g1b + linear(&g);
                let mut num = &qfactorial(s as u32, 2) * &qfactorial(j as u32, 1);
                let mut den = &qfactorial(g1 as u32, 2) * &qfactorial(g1b as u32, 2);
                den = &den * &qfactorial(s as u32, 1);
                for (i, &gi) in g.iter().enumerate() {
                    if i != one && i != one_bar {
                        den = &den * &qfactorial(gi as u32, 1);
                    }
                }
                if !plain_g {
                    // (q^{mu_1/2} + q^{-mu_1/2}) / (q^{s/2} + q^{-s/2})
                    //   = (q^{g1} + q^{g1bar}) / (1 + q^s)
                    num = &num * &(&LaurentPoly::monomial(g1, 1) + &LaurentPoly::monomial(g1b, 1));
                    den = &den * &(&LaurentPoly::one() + &LaurentPoly::monomial(s, 1));
                }
                total += &exact_div(&num, &den)?.shift(e);
            }
        }
        Family::A1 => unreachable!(),
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub j: usize,
    pub b: String,
    pub mu: Vec<i64>,
    pub weight: Vec<i64>,
    pub closed_form: LaurentPoly,
    pub enumerated: LaurentPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    pub j_max: usize,
    pub cells_checked: usize,
    /// Cells whose enumerated value is nonzero.
    pub support_cells: usize,
    pub mismatches: Vec<Mismatch>,
    /// `b = 0` cells where the two `s` choices disagree (`B` type only).
    pub s_choice_mismatches: Vec<Mismatch>,
    pub negative_coefficients: usize,
    /// Cells where the recursion table and the brute force disagree.
    pub recursion_mismatches: usize,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
            && self.s_choice_mismatches.is_empty()
            && self.negative_coefficients == 0
            && self.recursion_mismatches == 0
    }
}

/// Parameter vectors whose weights cover every classical weight reachable
/// by `j` letters.
fn parameter_box(ty: AffineType, j: usize) -> Vec<Vec<i64>> {
    let j = j as i64;
    if ty.family == Family::A1 {
        return (0..=ty.rank)
            .map(|_| 0..=j)
            .multi_cartesian_product()
            .filter(|v| v.iter().sum::<i64>() == j)
            .collect();
    }
    (0..ty.rank)
        .map(|_| -j..=j)
        .multi_cartesian_product()
        .collect()
}

/// Compares the closed form with brute-force path enumeration for every
/// `b`, every parameter in the reachable box and `j <= j_max`; the
/// recursion table is compared with the same enumeration.
pub fn verify_type(ty: AffineType, j_max: usize) -> Result<VerifyReport> {
    let crystal = build_crystal(ty);
    let table = GTable::build(&crystal, j_max);
    let zero = crystal.index_of(&Label::Letter(Letter::Num(0)));
    let mut report = VerifyReport {
        ty: ty.family.tag().to_string(),
        rank: ty.rank,
        j_max,
        cells_checked: 0,
        support_cells: 0,
        mismatches: Vec::new(),
        s_choice_mismatches: Vec::new(),
        negative_coefficients: 0,
        recursion_mismatches: 0,
    };
    for j in 0..=j_max {
        let params = parameter_box(ty, j);
        let brute = g_enumerate_all(&crystal, j);
        for ((b, w), p) in &brute {
            if table.get(j, *b, w) != *p {
                report.recursion_mismatches += 1;
            }
        }
        let table_cells: usize = crystal.elements().map(|b| table.support(j, b).len()).sum();
        report.recursion_mismatches += table_cells.abs_diff(brute.len());
        // every supported weight must be hit by some parameter
        let mut hit: BTreeMap<(usize, Vec<i64>), bool> = brute.keys().map(|k| (k.clone(), false)).collect();
        let cells: Vec<Result<(usize, Vec<i64>, Vec<i64>, LaurentPoly, LaurentPoly, Option<bool>)>> = crystal
            .elements()
            .cartesian_product(params.iter())
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(b, mu)| {
                let w = mu_weight(ty, mu)?;
                let closed = g_closed_form(&crystal, *b, mu, j)?;
                let enumerated = brute.get(&(*b, w.clone())).cloned().unwrap_or_default();
                let s_ok = if ty.family == Family::B1 && Some(*b) == zero {
                    let a = g_closed_form_with(&crystal, *b, mu, j, SChoice::N)?;
                    let c = g_closed_form_with(&crystal, *b, mu, j, SChoice::One)?;
                    Some(a == c)
                } else {
                    None
                };
                Ok((*b, mu.to_vec(), w, closed, enumerated, s_ok))
            })
            .collect();
        for cell in cells {
            let (b, mu, w, closed, enumerated, s_ok) = cell?;
            report.cells_checked += 1;
            if !enumerated.is_zero() {
                report.support_cells += 1;
            }
            if let Some(h) = hit.get_mut(&(b, w.clone())) {
                *h = true;
            }
            if !closed.all_coeffs_nonnegative() {
                report.negative_coefficients += 1;
            }
            let mismatch = Mismatch {
                j,
                b: crystal.label(b).to_string(),
                mu,
                weight: w,
                closed_form: closed.clone(),
                enumerated: enumerated.clone(),
            };
            if s_ok == Some(false) {
                report.s_choice_mismatches.push(mismatch.clone());
            }
            if closed != enumerated {
                report.mismatches.push(mismatch);
            }
        }
        if let Some(((b, w), _)) = hit.iter().find(|(_, h)| !**h) {
            return Err(Error::Internal(format!(
                "parameter box misses weight {w:?} for {} at j = {j}",
                crystal.label(*b)
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictionaries_match_letter_weights() {
        for f in Family::ALL {
            let ty = AffineType::minimal(f);
            let c = build_crystal(ty);
            let n = ty.rank;
            let len = if f == Family::A1 { n + 1 } else { n };
            for k in 0..len {
                let mut mu = vec![0i64; len];
                mu[k] = 1;
                let l = if f == Family::A1 {
                    Letter::Num(k as u32)
                } else {
                    Letter::Num(k as u32 + 1)
                };
                assert_eq!(mu_weight(ty, &mu).unwrap(), c.wt(letter(&c, l)), "{f} {k}");
            }
        }
    }

    #[test]
    fn single_letter_reduction() {
        let ty = AffineType::new(Family::A1, 2).unwrap();
        let c = build_crystal(ty);
        for b in c.elements() {
            for cc in 0..3usize {
                for j in 0..5i64 {
                    let mut mu = vec![0; 3];
                    mu[cc] = j;
                    let want = LaurentPoly::monomial(j * (j - 1) / 2 + c.energy(b, cc) * j, 1);
                    assert_eq!(g_closed_form(&c, b, &mu, j as usize).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn a1_rank1_matches() {
        let r = verify_type(AffineType::new(Family::A1, 1).unwrap(), 5).unwrap();
        assert!(r.ok(), "{:?}", r.mismatches.first());
    }

    #[test]
    fn minimal_ranks_small_j() {
        for f in Family::ALL {
            let r = verify_type(AffineType::minimal(f), 2).unwrap();
            assert!(r.ok(), "{f}: {:?}", r.mismatches.first());
        }
    }
}
