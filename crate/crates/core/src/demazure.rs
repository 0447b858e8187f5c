//! Demazure crystals realised as path sets, the per-type schedules
//! `i_a^(j)`, the conditions they must satisfy, and Demazure characters by
//! paths and by Demazure operators.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::crystals::Crystal;
use crate::error::{Error, Result};
use crate::paths::{GroundState, Path};
use crate::weights::{demazure_op, AffineType, is_bruhat_ascent, Family, FormalCharacter, Weight, WeylElement};

/// Every `(lambda, variant)` with a printed table for the family.
pub fn scheduled_weights(t: AffineType) -> Vec<(Weight, Variant)> {
    let size = t.size();
    let n = t.rank;
    match t.family {
        Family::A1 | Family::A2Odd | Family::D2 => vec![(Weight::fundamental(size, 0), Variant::Canonical)],
        Family::D1 => vec![
            (Weight::fundamental(size, 0), Variant::Canonical),
            (Weight::fundamental(size, 0), Variant::Alternate),
        ],
        Family::B1 => vec![
            (Weight::fundamental(size, 0), Variant::Canonical),
            (Weight::fundamental(size, n), Variant::Canonical),
            (Weight::fundamental(size, n), Variant::Alternate),
        ],
        Family::A2Even => vec![(Weight::fundamental(size, n), Variant::Canonical)],
    }
}

/// For a level-1 fundamental weight `Lambda_k`, a tabulated index `k0` and a
/// diagram automorphism `perm` (node `i` goes to `perm[i]`) with
/// `perm[k0] = k`.
pub fn reduce_fundamental(t: AffineType, k: usize) -> Result<(usize, Vec<usize>)> {
    t.check_index(k)?;
    let n = t.rank;
    let id: Vec<usize> = (0..=n).collect();
    let swap01 = |mut p: Vec<usize>| {
        p.swap(0, 1);
        p
    };
    let reversal: Vec<usize> = (0..=n).map(|i| n - i).collect();
    let (k0, perm) = match (t.family, k) {
        (_, k) if scheduled_weights(t).iter().any(|(w, _)| w.lambda[k] == 1) => (k, id),
        (Family::A1, k) => (0, (0..=n).map(|i| (i + k) % (n + 1)).collect()),
        (Family::B1 | Family::A2Odd, 1) => (0, swap01(id)),
        (Family::D1, 1) => {
            let mut p = swap01(id);
            p.swap(n - 1, n);
            (0, p)
        }
        (Family::D1, k) if k == n => (0, reversal),
        (Family::D1, k) if k == n - 1 => {
            let tau = |x: usize| if x == n { n - 1 } else if x == n - 1 { n } else { x };
            (0, reversal.into_iter().map(tau).collect())
        }
        (Family::D2, k) if k == n => (0, reversal),
        _ => {
            return Err(Error::UnsupportedWeight {
                family: t.family.tag(),
                weight: format!("Lambda_{k}"),
                reason: "not a level-1 weight related to a tabulated one".into(),
            })
        }
    };
    let a = &t.cartan_data().matrix;
    let size = n + 1;
    let ok = perm[k0] == k
        && (0..size).all(|i| (0..size).all(|j| a[perm[i]][perm[j]] == a[i][j]));
    if !ok {
        return Err(Error::Internal(format!("bad diagram automorphism {perm:?}")));
    }
    Ok((k0, perm))
}

/// Which printed table to use when two are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Variant {
    #[default]
    Canonical,
    Alternate,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub lambda: Weight,
    pub d: usize,
    pub variant: Variant,
    pub ground: GroundState,
    /// `Some(i)` overrides `i_a^(j)` for every `j` (used for negative controls).
    overrides: Vec<(usize, usize, usize)>,
    truncate: Option<usize>,
}

fn parity(m: i64) -> usize {
    m.rem_euclid(2) as usize
}

impl Schedule {
    /// Builds the schedule for `lambda`, which must be a fundamental weight
    /// covered by the tables for the crystal's family.
    pub fn new(crystal: &Crystal, lambda: &Weight, variant: Variant) -> Result<Self> {
        let ty = crystal.ty();
        let n = ty.rank;
        if crystal.classical_only() || crystal.level() != 1 {
            return Err(Error::Domain("schedules exist only for level-1 perfect crystals".into()));
        }
        let k = fundamental_index(lambda).ok_or_else(|| Error::UnsupportedWeight {
            family: ty.family.tag(),
            weight: lambda.to_string(),
            reason: "not a fundamental weight".into(),
        })?;
        let supported = match ty.family {
            Family::A1 | Family::D1 | Family::A2Odd | Family::D2 => k == 0,
            Family::B1 => k == 0 || k == n,
            Family::A2Even => k == n,
        };
        let alternate_ok = match ty.family {
            Family::B1 => k == n,
            Family::D1 => true,
            _ => false,
        };
        if !supported {
            return Err(Error::UnsupportedWeight {
                family: ty.family.tag(),
                weight: lambda.to_string(),
                reason: "no table for this weight; relate it to a tabulated one by a diagram automorphism".into(),
            });
        }
        if variant == Variant::Alternate && !alternate_ok {
            return Err(Error::UnsupportedWeight {
                family: ty.family.tag(),
                weight: lambda.to_string(),
                reason: "only one table is available".into(),
            });
        }
        let d = match ty.family {
            Family::A1 => n,
            Family::B1 | Family::A2Odd => 2 * n - 1,
            Family::D1 => 2 * n - 2,
            Family::A2Even | Family::D2 => 2 * n,
        };
        let ground = GroundState::new(crystal, lambda)?;
        Ok(Self {
            lambda: lambda.cl(),
            d,
            variant,
            ground,
            overrides: Vec::new(),
            truncate: None,
        })
    }

    /// Replaces `i_a^(j)` by `i` (negative controls).
    pub fn with_override(mut self, j: usize, a: usize, i: usize) -> Self {
        self.overrides.push((j, a, i));
        self
    }

    /// Pretends `d` is smaller (negative controls).
    pub fn truncated(mut self, d: usize) -> Self {
        self.truncate = Some(d);
        self
    }

    pub fn steps_per_block(&self) -> usize {
        self.truncate.unwrap_or(self.d)
    }

    /// `i_a^(j)` for `j >= 1`, `1 <= a <= d`.
    pub fn index(&self, crystal: &Crystal, j: usize, a: usize) -> usize {
        if let Some(&(_, _, i)) = self.overrides.iter().find(|o| o.0 == j && o.1 == a) {
            return i;
        }
        let n = crystal.ty().rank;
        let d = self.d;
        let ji = j as i64;
        let eps_1mj = parity(1 - ji);
        match crystal.ty().family {
            Family::A1 => (a as i64 - ji).rem_euclid(n as i64 + 1) as usize,
            Family::B1 if self.lambda.lambda[0] == 1 => {
                if a == 1 || a == d {
                    eps_1mj
                } else {
                    a.min(2 * n - a)
                }
            }
            Family::B1 => match self.variant {
                Variant::Canonical => {
                    if a < n {
                        n + 1 - a
                    } else {
                        a - n
                    }
                }
                Variant::Alternate => {
                    if a <= n + 1 {
                        n + 1 - a
                    } else {
                        a - n
                    }
                }
            },
            Family::D1 => {
                if a == 1 || a == d {
                    eps_1mj
                } else {
                    match self.variant {
                        Variant::Canonical if a == n - 1 => n,
                        Variant::Alternate if a == n => n,
                        _ => a.min(2 * n - 1 - a),
                    }
                }
            }
            Family::A2Odd => {
                if a == 1 || a == d {
                    eps_1mj
                } else {
                    a.min(2 * n - a)
                }
            }
            Family::A2Even => (n as i64 + 1 - a as i64).unsigned_abs() as usize,
            Family::D2 => (a - 1).min(2 * n + 1 - a),
        }
    }

    /// `(j, a)` with `k = (j-1) d + a`, `1 <= a <= d`; `k >= 1`.
    pub fn split(&self, k: usize) -> (usize, usize) {
        let d = self.steps_per_block();
        ((k - 1) / d + 1, (k - 1) % d + 1)
    }

    /// Indices `[i_1, .., i_k]` of `w^(k) = r_{i_k} .. r_{i_1}`.
    pub fn weyl_word(&self, crystal: &Crystal, k: usize) -> Vec<usize> {
        (1..=k)
            .map(|m| {
                let (j, a) = self.split(m);
                self.index(crystal, j, a)
            })
            .collect()
    }

    /// `B_a^(j)`, sorted.
    pub fn b_set(&self, crystal: &Crystal, j: usize, a: usize) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.ground.bar(j)]);
        for step in 1..=a {
            let i = self.index(crystal, j, step);
            let mut next = BTreeSet::new();
            for &b in &set {
                next.extend(crystal.f_string(i, b));
            }
            set = next;
        }
        set.into_iter().collect()
    }
}

fn fundamental_index(lambda: &Weight) -> Option<usize> {
    let nonzero: Vec<usize> = (0..lambda.lambda.len())
        .filter(|&i| lambda.lambda[i] != 0)
        .collect();
    match nonzero.as_slice() {
        [k] if lambda.lambda[*k] == 1 => Some(*k),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks (II) `B_d^(j) = B`, (III) `<lambda_j, h_i> <= eps_i(b)` on
/// `B_{a-1}^(j)`, and (IV) that every step of the Weyl word is a Bruhat
/// ascent, for `j <= j_max`.
pub fn check_conditions(s: &Schedule, crystal: &Crystal, j_max: usize) -> ConditionReport {
    let mut violations = Vec::new();
    let d = s.steps_per_block();
    for j in 1..=j_max {
        if s.b_set(crystal, j, d).len() != crystal.len() {
            violations.push(format!("(II) fails at j={j}: B_d is a proper subset"));
        }
        for a in 1..=d {
            let i = s.index(crystal, j, a);
            let bound = s.ground.lambda_at(j)[i];
            for b in s.b_set(crystal, j, a - 1) {
                if bound > crystal.eps(i, b) {
                    violations.push(format!(
                        "(III) fails at j={j} a={a}: eps_{i}({}) < {bound}",
                        crystal.label(b)
                    ));
                }
            }
        }
    }
    let cartan = crystal.cartan();
    let mut w = WeylElement::identity(cartan.size());
    for (step, i) in s.weyl_word(crystal, j_max * d).into_iter().enumerate() {
        if !is_bruhat_ascent(cartan, i, &w) {
            violations.push(format!("(IV) fails at k={}: r_{i} is not an ascent", step + 1));
            break;
        }
        w = w.left_mul(cartan, i);
    }
    ConditionReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// `P^(k)(lambda, B)` from the product description, sorted.
pub fn demazure_paths(s: &Schedule, crystal: &Crystal, k: usize) -> Vec<Path> {
    if k == 0 {
        return vec![s.ground.ground()];
    }
    let (j, a) = s.split(k);
    let top = s.b_set(crystal, j, a);
    let mut out: Vec<Path> = (0..j - 1)
        .map(|_| crystal.elements())
        .multi_cartesian_product()
        .cartesian_product(top.iter())
        .map(|(mut low, &t)| {
            low.push(t);
            s.ground.path(low)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `P^(k)` built by applying `f_i`-strings along the Weyl word, sorted.
pub fn demazure_paths_recursive(s: &Schedule, crystal: &Crystal, k: usize) -> Vec<Path> {
    let mut set: BTreeSet<Path> = BTreeSet::from([s.ground.ground()]);
    for i in s.weyl_word(crystal, k) {
        let mut next = BTreeSet::new();
        for p in &set {
            let mut cur = Some(p.clone());
            while let Some(q) = cur {
                cur = s.ground.apply_f(crystal, i, &q);
                next.insert(q);
            }
        }
        set = next;
    }
    set.into_iter().collect()
}

pub fn character_by_paths(s: &Schedule, crystal: &Crystal, k: usize) -> FormalCharacter {
    let mut chi = FormalCharacter::new();
    for p in demazure_paths(s, crystal, k) {
        chi.add_term(s.ground.path_weight(crystal, &p), 1.into());
    }
    chi
}

pub fn character_by_operators(s: &Schedule, crystal: &Crystal, k: usize) -> FormalCharacter {
    let cartan = crystal.cartan();
    s.weyl_word(crystal, k)
        .into_iter()
        .fold(FormalCharacter::exp(s.lambda.clone()), |chi, i| {
            demazure_op(cartan, i, &chi)
        })
}
