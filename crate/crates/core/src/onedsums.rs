//! One-dimensional sums: unrestricted `g_j`, restricted `X_j` and
//! classically restricted `X-bar_j`, their recursions, alternating Weyl
//! group sums, the disjoint decomposition search, Kostka-Foulkes
//! polynomials and `j -> infinity` stabilisation.
//!
//! `g_j(b, mu)` for `mu = mu_cl + k delta` is `q^k` times the energy
//! generating function of `P_j(b, mu_cl)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::crystals::{build_symmetric_crystal, symmetric_ground, Crystal};
use crate::demazure::Schedule;
use crate::error::{Error, Result};
use crate::paths::GroundState;
use crate::qring::LaurentPoly;
use crate::tensor::energy_of;
use crate::weights::{enumerate_weyl, FormalCharacter, Weight, WeylElement};

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Multiplies by `q^{k}` where `k` is the delta coordinate of `mu`.
pub fn delta_normalize(mu: &Weight, poly: &LaurentPoly) -> LaurentPoly {
    poly.shift_half(mu.doubled_delta())
}

/// Layered table of `sum_{p in P_j(b, mu)} q^{E(p)}` for all `b`, all
/// classical `mu` and `j <= j_max`, filled by the recursion in `j`.
#[derive(Debug, Clone)]
pub struct GTable {
    levels: Vec<HashMap<(usize, Vec<i64>), LaurentPoly>>,
}

impl GTable {
    pub fn build(crystal: &Crystal, j_max: usize) -> Self {
        let zero = vec![0i64; crystal.size()];
        let mut levels = vec![crystal
            .elements()
            .map(|b| ((b, zero.clone()), LaurentPoly::one()))
            .collect::<HashMap<_, _>>()];
        for j in 1..=j_max {
            let prev = &levels[j - 1];
            let mut entries: Vec<(&(usize, Vec<i64>), &LaurentPoly)> = prev.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            let next: HashMap<(usize, Vec<i64>), LaurentPoly> = crystal
                .elements()
                .collect::<Vec<_>>()
                .par_iter()
                .flat_map_iter(|&b| {
                    let mut local: HashMap<Vec<i64>, LaurentPoly> = HashMap::new();
                    for ((b2, nu), poly) in &entries {
                        let mu = add(nu, crystal.wt(*b2));
                        let term = poly.shift(j as i64 * crystal.energy(b, *b2));
                        *local.entry(mu).or_default() += &term;
                    }
                    local
                        .into_iter()
                        .filter(|(_, p)| !p.is_zero())
                        .map(move |(mu, p)| ((b, mu), p))
                })
                .collect();
            levels.push(next);
        }
        Self { levels }
    }

    pub fn j_max(&self) -> usize {
        self.levels.len() - 1
    }

    /// Unnormalised sum for classical `mu`.
    pub fn get(&self, j: usize, b: usize, mu: &[i64]) -> LaurentPoly {
        self.levels[j]
            .get(&(b, mu.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// `g_j(b, mu)` for an affine weight.
    pub fn g(&self, j: usize, b: usize, mu: &Weight) -> LaurentPoly {
        delta_normalize(mu, &self.get(j, b, &mu.lambda))
    }

    /// Classical weights with nonzero sum for the given `b`, sorted.
    pub fn support(&self, j: usize, b: usize) -> Vec<(Vec<i64>, LaurentPoly)> {
        let mut v: Vec<(Vec<i64>, LaurentPoly)> = self.levels[j]
            .iter()
            .filter(|((b2, _), _)| *b2 == b)
            .map(|((_, mu), p)| (mu.clone(), p.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// Brute-force `g_j(b, mu)` over `P_j(b, cl(mu))`.
pub fn g_enumerate(crystal: &Crystal, b: usize, mu: &Weight, j: usize) -> LaurentPoly {
    let mut total = LaurentPoly::zero();
    for mut w in crate::paths::enumerate_pj(crystal, &mu.lambda, j) {
        w.push(b);
        total += &LaurentPoly::monomial(energy_of(crystal, &w), 1);
    }
    delta_normalize(mu, &total)
}

/// Brute-force table of all unnormalised sums at fixed `j`, keyed by
/// `(b, classical mu)`, from one pass over `B^{(x) j}`.
pub fn g_enumerate_all(crystal: &Crystal, j: usize) -> BTreeMap<(usize, Vec<i64>), LaurentPoly> {
    let words: Vec<Vec<usize>> = (0..j)
        .map(|_| crystal.elements())
        .multi_cartesian_product()
        .collect();
    let parts: Vec<BTreeMap<(usize, Vec<i64>), LaurentPoly>> = crystal
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&b| {
            let mut out: BTreeMap<(usize, Vec<i64>), LaurentPoly> = BTreeMap::new();
            for w in &words {
                let mut mu = vec![0i64; crystal.size()];
                for &x in w {
                    mu = add(&mu, crystal.wt(x));
                }
                let mut full = w.clone();
                full.push(b);
                let e = energy_of(crystal, &full);
                *out.entry((b, mu)).or_default() += &LaurentPoly::monomial(e, 1);
            }
            out
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// `g_j(b, mu)` through the recursion in `j`.
pub fn g_recursive(crystal: &Crystal, b: usize, mu: &Weight, j: usize) -> LaurentPoly {
    GTable::build(crystal, j).g(j, b, mu)
}

/// Evaluates both sides of the `2m`-relation for `m = phi_i(b)`.
pub fn two_m_sides(
    table: &GTable,
    crystal: &Crystal,
    b: usize,
    i: usize,
    mu: &Weight,
    j: usize,
) -> (LaurentPoly, LaurentPoly) {
    let cartan = crystal.cartan();
    let alpha = &cartan.alpha[i];
    let string = crystal.f_string(i, b);
    let m = string.len() as i64 - 1;
    let twist = |t: i64| if i == 0 { t * j as i64 } else { 0 };
    let mut lhs = LaurentPoly::zero();
    let mut rhs = LaurentPoly::zero();
    for (t, &bt) in string.iter().enumerate() {
        let t = t as i64;
        let left_mu = mu.add(&alpha.scaled(t));
        lhs += &table.g(j, bt, &left_mu).shift(twist(t));
        let right_mu = cartan.reflect(i, &mu.add(&alpha.scaled(m - t)));
        rhs += &table.g(j, bt, &right_mu).shift(twist(t));
    }
    (lhs, rhs)
}

pub fn check_2m_relation(
    table: &GTable,
    crystal: &Crystal,
    b: usize,
    i: usize,
    mu: &Weight,
    j: usize,
) -> bool {
    let (l, r) = two_m_sides(table, crystal, b, i, mu, j);
    l == r
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    /// `n = <h_i, mu> + m`.
    pub n: i64,
    pub source: usize,
    pub target: usize,
    /// Sources on which `f_i^n` vanishes or leaves the target set.
    pub escapes: usize,
    /// Targets hit more than once or not at all.
    pub defects: usize,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.escapes == 0 && self.defects == 0 && self.source == self.target
    }
}

/// Applies `f_i^n`, `n = <h_i, mu> + phi_i(b)`, to every word of
/// `U_t P_j(f_i^t b, mu + t alpha_i)` and compares the images with
/// `U_t P_j(f_i^t b, r_i(mu + (m - t) alpha_i))`. Returns `None` when
/// `n < 0`.
pub fn check_string_bijection(crystal: &Crystal, b: usize, i: usize, mu: &[i64], j: usize) -> Option<BijectionReport> {
    let cartan = crystal.cartan();
    let alpha = cartan.cl_alpha(i);
    let string = crystal.f_string(i, b);
    let m = string.len() as i64 - 1;
    let n = mu[i] + m;
    if n < 0 {
        return None;
    }
    let shift = |v: &[i64], k: i64| -> Vec<i64> { v.iter().zip(alpha).map(|(x, a)| x + k * a).collect() };
    let words = |top: usize, weight: &[i64]| -> Vec<Vec<usize>> {
        crate::paths::enumerate_pj(crystal, weight, j)
            .into_iter()
            .map(|mut w| {
                w.push(top);
                w
            })
            .collect()
    };
    let mut source = Vec::new();
    let mut target = BTreeSet::new();
    for (t, &bt) in string.iter().enumerate() {
        let t = t as i64;
        source.extend(words(bt, &shift(mu, t)));
        let v = shift(mu, m - t);
        target.extend(words(bt, &shift(&v, -v[i])));
    }
    let mut images: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut escapes = 0;
    for w in &source {
        let mut cur = Some(crate::tensor::TensorWord::from_right(w.clone()));
        for _ in 0..n {
            cur = cur.and_then(|x| x.apply_f(crystal, i));
        }
        match cur {
            Some(x) => {
                let img: Vec<usize> = (1..=x.len()).map(|k| x.get(k)).collect();
                if target.contains(&img) {
                    *images.entry(img).or_default() += 1;
                } else {
                    escapes += 1;
                }
            }
            None => escapes += 1,
        }
    }
    let defects = images.values().filter(|&&c| c > 1).count() + (target.len() - images.len());
    Some(BijectionReport {
        n,
        source: source.len(),
        target: target.len(),
        escapes,
        defects,
    })
}

/// Both sides of the recursion obtained from one Demazure step inside
/// block `j`: with `i = i_{a+1}^(j)`,
/// `sum_{B_{a+1} - B_a} q^{jH} g_{j-1}(b, mu - wt b)` against
/// `sum_{B_{a+1}} q^{jH} g_{j-1}(b, mu + alpha_i - wt b)
///  - sum_{B_a} q^{jH} g_{j-1}(b, r_i(mu + rho + lambda_j) - lambda_j - rho - wt b)`.
pub fn block_step_sides(
    s: &Schedule,
    crystal: &Crystal,
    table: &GTable,
    j: usize,
    a: usize,
    mu: &Weight,
) -> (LaurentPoly, LaurentPoly) {
    let cartan = crystal.cartan();
    let gs = &s.ground;
    let i = s.index(crystal, j, a + 1);
    let top = gs.bar(j + 1);
    let lam = Weight::classical(gs.lambda_at(j).to_vec());
    let rho = Weight::rho(cartan.size());
    let lower: BTreeSet<usize> = s.b_set(crystal, j, a).into_iter().collect();
    let upper: BTreeSet<usize> = s.b_set(crystal, j, a + 1).into_iter().collect();
    let term = |b: usize, nu: &Weight| -> LaurentPoly {
        let arg = nu.sub(&Weight::classical(crystal.wt(b).to_vec()));
        table.g(j - 1, b, &arg).shift(j as i64 * crystal.energy(top, b))
    };
    let mut lhs = LaurentPoly::zero();
    for &b in upper.difference(&lower) {
        lhs += &term(b, mu);
    }
    let mut rhs = LaurentPoly::zero();
    let up = mu.add(&cartan.alpha[i]);
    for &b in &upper {
        rhs += &term(b, &up);
    }
    let reflected = cartan.reflect(i, &mu.add(&rho).add(&lam)).sub(&lam).sub(&rho);
    for &b in &lower {
        rhs -= &term(b, &reflected);
    }
    (lhs, rhs)
}

/// Which indices the admissibility condition involves. Classical weights
/// are given by their coordinates on `Lambda-bar_1 .. Lambda-bar_n`;
/// affine ones by all `n + 1` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Restriction {
    Affine,
    Classical,
}

impl Restriction {
    fn offset(self) -> usize {
        match self {
            Restriction::Affine => 0,
            Restriction::Classical => 1,
        }
    }

    pub fn coords(self, crystal: &Crystal) -> usize {
        crystal.size() - self.offset()
    }

    /// `xi + wt(b)` in this coordinate system.
    pub fn add_wt(self, crystal: &Crystal, xi: &[i64], b: usize) -> Vec<i64> {
        add(xi, &crystal.wt(b)[self.offset()..])
    }

    pub fn sub_wt(self, crystal: &Crystal, xi: &[i64], b: usize) -> Vec<i64> {
        sub(xi, &crystal.wt(b)[self.offset()..])
    }

    /// `e_i^{<h_i, xi> + 1} b = 0` for every relevant `i`.
    pub fn admissible(self, crystal: &Crystal, xi: &[i64], b: usize) -> bool {
        let off = self.offset();
        (off..crystal.size()).all(|i| crystal.eps(i, b) <= xi[i - off])
    }

    fn check(self, crystal: &Crystal, xi: &[i64], what: &str) -> Result<()> {
        if xi.len() != self.coords(crystal) {
            return Err(Error::WeightShape {
                got: xi.len(),
                expected: self.coords(crystal),
            });
        }
        if xi.iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!("{what} is not dominant")));
        }
        if self == Restriction::Affine {
            let level = crystal.cartan().level(&Weight::classical(xi.to_vec()));
            if level < crystal.level() {
                return Err(Error::Domain(format!(
                    "{what} has level {level} below the crystal level {}",
                    crystal.level()
                )));
            }
        }
        Ok(())
    }
}

fn check_pair(crystal: &Crystal, r: Restriction, xi: &[i64], eta: &[i64]) -> Result<()> {
    r.check(crystal, xi, "xi")?;
    r.check(crystal, eta, "eta")?;
    if r == Restriction::Affine {
        let c = crystal.cartan();
        if c.level(&Weight::classical(xi.to_vec())) != c.level(&Weight::classical(eta.to_vec())) {
            return Err(Error::Domain("xi and eta have different levels".into()));
        }
    }
    Ok(())
}

/// Brute force over all `b_j .. b_1` with the admissibility chain.
pub fn x_enumerate(
    crystal: &Crystal,
    r: Restriction,
    b: usize,
    xi: &[i64],
    eta: &[i64],
    j: usize,
) -> Result<LaurentPoly> {
    check_pair(crystal, r, xi, eta)?;
    if !r.admissible(crystal, &r.sub_wt(crystal, xi, b), b) {
        return Ok(LaurentPoly::zero());
    }
    let mut total = LaurentPoly::zero();
    for written in (0..j).map(|_| crystal.elements()).multi_cartesian_product() {
        // written = [b_j, .., b_1]
        let mut cur = xi.to_vec();
        let mut ok = true;
        for &bi in &written {
            if !r.admissible(crystal, &cur, bi) {
                ok = false;
                break;
            }
            cur = r.add_wt(crystal, &cur, bi);
        }
        if ok && cur == eta {
            let mut letters: Vec<usize> = written.into_iter().rev().collect();
            letters.push(b);
            total += &LaurentPoly::monomial(energy_of(crystal, &letters), 1);
        }
    }
    Ok(total)
}

/// Memoised recursion
/// `X_j(b, xi, eta) = sum_{(xi, b') admissible} q^{j H(b (x) b')} X_{j-1}(b', xi + wt b', eta)`.
pub fn x_recursive(
    crystal: &Crystal,
    r: Restriction,
    b: usize,
    xi: &[i64],
    eta: &[i64],
    j: usize,
) -> Result<LaurentPoly> {
    check_pair(crystal, r, xi, eta)?;
    if !r.admissible(crystal, &r.sub_wt(crystal, xi, b), b) {
        return Ok(LaurentPoly::zero());
    }
    let mut memo = HashMap::new();
    Ok(x_rec(crystal, r, b, xi.to_vec(), eta, j, &mut memo))
}

fn x_rec(
    crystal: &Crystal,
    r: Restriction,
    b: usize,
    xi: Vec<i64>,
    eta: &[i64],
    j: usize,
    memo: &mut HashMap<(usize, usize, Vec<i64>), LaurentPoly>,
) -> LaurentPoly {
    if j == 0 {
        return if xi == eta {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        };
    }
    let key = (j, b, xi.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = LaurentPoly::zero();
    for b2 in crystal.elements() {
        if !r.admissible(crystal, &xi, b2) {
            continue;
        }
        let next = r.add_wt(crystal, &xi, b2);
        let sub = x_rec(crystal, r, b2, next, eta, j - 1, memo);
        if !sub.is_zero() {
            total += &sub.shift(j as i64 * crystal.energy(b, b2));
        }
    }
    memo.insert(key, total.clone());
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylSumOutcome {
    pub poly: LaurentPoly,
    /// Group elements visited.
    pub elements: usize,
    /// Largest length reached.
    pub max_length: usize,
}

/// Lifts finite coordinates to a level-0 classical weight, if integral.
fn lift_level_zero(crystal: &Crystal, fin: &[i64]) -> Option<Vec<i64>> {
    let a = &crystal.cartan().comarks;
    let s: i64 = fin.iter().zip(&a[1..]).map(|(m, c)| m * c).sum();
    if s % a[0] != 0 {
        return None;
    }
    let mut v = vec![-s / a[0]];
    v.extend_from_slice(fin);
    Some(v)
}

/// Alternating sum `sum_w det(w) g_j(b, w(eta + rho) - xi - rho)` over the
/// classical (finite) or affine Weyl group.
///
/// The affine sum visits the group shell by shell in length. Every
/// element `w` moves the regular dominant `eta + rho` down by
/// `c_0(w) alpha_0 + ..`, `c_0` never decreases along a length-increasing
/// step, and a contributing `w` must have `c_0` equal to minus the delta
/// coordinate forced by the invariant norm; the walk stops as soon as a
/// whole shell lies above every forced value.
pub fn x_by_weyl_sum(
    crystal: &Crystal,
    table: &GTable,
    r: Restriction,
    b: usize,
    xi: &[i64],
    eta: &[i64],
    j: usize,
    max_length: usize,
) -> Result<WeylSumOutcome> {
    check_pair(crystal, r, xi, eta)?;
    if j > table.j_max() {
        return Err(Error::Domain("table too short for j".into()));
    }
    if !r.admissible(crystal, &r.sub_wt(crystal, xi, b), b) {
        return Ok(WeylSumOutcome {
            poly: LaurentPoly::zero(),
            elements: 0,
            max_length: 0,
        });
    }
    let cartan = crystal.cartan();
    let size = cartan.size();
    match r {
        Restriction::Classical => {
            let group = enumerate_weyl(cartan, true, usize::MAX);
            let mut big = vec![0i64];
            big.extend(eta.iter().map(|x| x + 1));
            let big = Weight::classical(big);
            let shift: Vec<i64> = xi.iter().map(|x| x + 1).collect();
            let mut total = LaurentPoly::zero();
            for w in &group {
                let img = w.apply(&big);
                let fin = sub(&img.lambda[1..], &shift);
                if let Some(mu) = lift_level_zero(crystal, &fin) {
                    let g = table.get(j, b, &mu);
                    if !g.is_zero() {
                        total += &g.scale(&w.det.into());
                    }
                }
            }
            Ok(WeylSumOutcome {
                poly: total,
                elements: group.len(),
                max_length: group.iter().map(|w| w.length()).max().unwrap_or(0),
            })
        }
        Restriction::Affine => {
            let rho = vec![1i64; size];
            let big = Weight::classical(add(eta, &rho));
            let base = add(xi, &rho);
            // forced delta coordinate for every classical target
            let mut targets: HashMap<Vec<i64>, (Rational64, LaurentPoly)> = HashMap::new();
            for (nu, poly) in table.support(j, b) {
                let t = add(&base, &nu);
                let k = cartan.orbit_delta(&big, &t);
                targets.insert(t, (k, poly));
            }
            let needed_c0 = targets
                .values()
                .map(|(k, _)| -*k)
                .max()
                .unwrap_or(Rational64::zero());
            let mut total = LaurentPoly::zero();
            let mut seen: std::collections::HashSet<Vec<Vec<i64>>> = Default::default();
            let id = WeylElement::identity(size);
            seen.insert(id.matrix.clone());
            let mut shell = vec![id];
            let mut visited = 0usize;
            let mut length = 0usize;
            loop {
                let mut min_c0: Option<Rational64> = None;
                for w in &shell {
                    visited += 1;
                    let img = w.apply(&big);
                    let c0 = -img.delta;
                    min_c0 = Some(min_c0.map_or(c0, |m| m.min(c0)));
                    if let Some((k, poly)) = targets.get(&img.lambda) {
                        if *k == img.delta {
                            let mu = Weight {
                                lambda: sub(&img.lambda, &base),
                                delta: img.delta,
                            };
                            total += &delta_normalize(&mu, poly).scale(&w.det.into());
                        }
                    }
                }
                if targets.is_empty() || min_c0.is_some_and(|m| m > needed_c0) {
                    break;
                }
                if length >= max_length {
                    return Err(Error::Guard(format!(
                        "affine Weyl sum not settled at length {max_length} (shell minimum c_0 = {}, needed {})",
                        min_c0.unwrap_or_default(),
                        needed_c0
                    )));
                }
                let mut next = Vec::new();
                for w in &shell {
                    for i in 0..size {
                        let nw = w.left_mul(cartan, i);
                        if seen.insert(nw.matrix.clone()) {
                            next.push(nw);
                        }
                    }
                }
                shell = next;
                length += 1;
            }
            Ok(WeylSumOutcome {
                poly: total,
                elements: visited,
                max_length: length,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub found: bool,
    /// Elements `b` with `(xi, b)` not admissible.
    pub non_admissible: Vec<usize>,
    /// Chosen `(b', i)` for every root `b'` with `eps_i(b') = <h_i, xi> + 1`.
    pub witness: Vec<(usize, usize)>,
}

/// Searches for a partition of the non-admissible set into the strings
/// `{f_i^t b'}` of all roots `b'` (`eps_i(b') = <h_i, xi> + 1` for some
/// relevant `i`), choosing one such `i` per root.
pub fn check_disjoint_decomposition(crystal: &Crystal, r: Restriction, xi: &[i64]) -> Result<DecompositionReport> {
    r.check(crystal, xi, "xi")?;
    let off = r.offset();
    let bad: BTreeSet<usize> = crystal
        .elements()
        .filter(|&b| !r.admissible(crystal, xi, b))
        .collect();
    let mut roots: Vec<(usize, Vec<usize>)> = Vec::new();
    for b in crystal.elements() {
        let opts: Vec<usize> = (off..crystal.size())
            .filter(|&i| crystal.eps(i, b) == xi[i - off] + 1)
            .collect();
        if !opts.is_empty() {
            roots.push((b, opts));
        }
    }
    let mut used = BTreeSet::new();
    let mut choice = Vec::new();
    let found = cover(crystal, &roots, 0, &bad, &mut used, &mut choice);
    Ok(DecompositionReport {
        found,
        non_admissible: bad.into_iter().collect(),
        witness: if found { choice } else { Vec::new() },
    })
}

fn cover(
    crystal: &Crystal,
    roots: &[(usize, Vec<usize>)],
    k: usize,
    target: &BTreeSet<usize>,
    used: &mut BTreeSet<usize>,
    choice: &mut Vec<(usize, usize)>,
) -> bool {
    if k == roots.len() {
        return used == target;
    }
    let (b, opts) = &roots[k];
    for &i in opts {
        let s = crystal.f_string(i, *b);
        if s.iter().any(|x| used.contains(x) || !target.contains(x)) {
            continue;
        }
        used.extend(s.iter().copied());
        choice.push((*b, i));
        if cover(crystal, roots, k + 1, target, used, choice) {
            return true;
        }
        choice.pop();
        for x in &s {
            used.remove(x);
        }
    }
    false
}

/// `K_{xi, (l^j)}(q) = q^{-lj} X-bar_j(b(l Lambda_0), 0, xi)` over the
/// symmetric tensor crystal of type `A_n^(1)`.
pub fn kostka(xi: &[u32], l: usize, j: usize, n: usize) -> Result<LaurentPoly> {
    let parts: Vec<i64> = xi.iter().map(|&x| x as i64).filter(|&x| x > 0).collect();
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain("xi is not a partition".into()));
    }
    let total: i64 = parts.iter().sum();
    if total != (l * j) as i64 {
        return Err(Error::Domain(format!(
            "xi has size {total}, expected l*j = {}",
            l * j
        )));
    }
    if parts.len() > n + 1 {
        return Err(Error::Domain(format!("xi has more than {} parts", n + 1)));
    }
    let crystal = build_symmetric_crystal(n, l)?;
    let part = |k: usize| parts.get(k).copied().unwrap_or(0);
    let eta: Vec<i64> = (0..n).map(|k| part(k) - part(k + 1)).collect();
    let top = symmetric_ground(&crystal);
    let x = x_recursive(&crystal, Restriction::Classical, top, &vec![0; n], &eta, j)?;
    Ok(x.shift(-((l * j) as i64)))
}

/// Demazure character through the 1dsums:
/// `q^{-c_j} sum_mu e^{lambda_j + mu} sum_{b in B_a^(j)} q^{j H(bbar_{j+1} (x) b)} g_{j-1}(b, mu - wt b)`.
pub fn character_by_onedsums(s: &Schedule, crystal: &Crystal, table: &GTable, k: usize) -> FormalCharacter {
    if k == 0 {
        return FormalCharacter::exp(s.lambda.clone());
    }
    let gs = &s.ground;
    let (j, a) = s.split(k);
    let cj = gs.c(crystal, j);
    let lam_j = gs.lambda_at(j).to_vec();
    let mut chi = FormalCharacter::new();
    for b in s.b_set(crystal, j, a) {
        let shift = j as i64 * crystal.energy(gs.bar(j + 1), b) - cj;
        for (nu, poly) in table.support(j - 1, b) {
            let cl = add(&add(&lam_j, &nu), crystal.wt(b));
            add_series(&mut chi, &cl, &poly.shift(shift));
        }
    }
    chi
}

/// The full-block form `q^{-c_j} sum_mu e^{lambda_j + mu} g_j(bbar_{j+1}, mu)`.
pub fn character_full_block(gs: &GroundState, crystal: &Crystal, table: &GTable, j: usize) -> FormalCharacter {
    let cj = gs.c(crystal, j);
    let lam_j = gs.lambda_at(j).to_vec();
    let mut chi = FormalCharacter::new();
    for (mu, poly) in table.support(j, gs.bar(j + 1)) {
        add_series(&mut chi, &add(&lam_j, &mu), &poly.shift(-cj));
    }
    chi
}

/// Adds `sum_e c_e q^e e^{cl}` with `q = e^{-delta}`.
fn add_series(chi: &mut FormalCharacter, cl: &[i64], poly: &LaurentPoly) {
    for (e2, c) in poly.terms() {
        chi.add_term(
            Weight {
                lambda: cl.to_vec(),
                delta: Rational64::new(-e2, 2),
            },
            c.clone(),
        );
    }
}

/// What to stabilise.
#[derive(Debug, Clone, Serialize)]
pub enum LimitKind {
    /// `q^{-c_j} g_j(bbar_{j+1}, nu - lambda_j)` for a classical weight `nu`.
    String { nu: Vec<i64> },
    /// `q^{-c_j} X_j(bbar_{j+1}, xi + lambda_j, eta)`.
    Restricted { xi: Vec<i64>, eta: Vec<i64> },
    /// `q^{-c_j} X-bar_j(bbar_{j+1}, lambda-bar_j, eta-bar)`.
    ClassicallyRestricted { eta: Vec<i64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct StableLimit {
    pub poly: LaurentPoly,
    /// First `j` of the run of equal truncations.
    pub j: usize,
    /// Whether the truncation also held one step past the run.
    pub monotone: bool,
    pub history: Vec<(usize, LaurentPoly)>,
}

pub fn stabilized_limit(
    crystal: &Crystal,
    lambda: &Weight,
    kind: &LimitKind,
    degree: i64,
    max_j: usize,
) -> Result<StableLimit> {
    if degree < 0 {
        return Err(Error::Domain("degree must be nonnegative".into()));
    }
    let gs = GroundState::new(crystal, lambda)?;
    let table = match kind {
        LimitKind::String { .. } => Some(GTable::build(crystal, max_j + 1)),
        _ => None,
    };
    let value = |j: usize| -> Result<LaurentPoly> {
        let b = gs.bar(j + 1);
        let lam_j = gs.lambda_at(j);
        let raw = match kind {
            LimitKind::String { nu } => table.as_ref().unwrap().get(j, b, &sub(nu, lam_j)),
            LimitKind::Restricted { xi, eta } => {
                x_recursive(crystal, Restriction::Affine, b, &add(xi, lam_j), eta, j)?
            }
            LimitKind::ClassicallyRestricted { eta } => {
                x_recursive(crystal, Restriction::Classical, b, &lam_j[1..], eta, j)?
            }
        };
        Ok(raw.shift(-gs.c(crystal, j)).truncate(degree))
    };
    // equal values at two consecutive j occur spuriously for small j, so
    // the truncation must hold over a full period of the ground state
    let window = gs.period() + 1;
    let mut history: Vec<(usize, LaurentPoly)> = Vec::new();
    for j in 0..=max_j {
        history.push((j, value(j)?));
        if history.len() >= window {
            let tail = &history[history.len() - window..];
            if !tail[0].1.is_zero() && tail.iter().all(|(_, v)| *v == tail[0].1) {
                let poly = tail[0].1.clone();
                let first = tail[0].0;
                let monotone = value(j + 1)? == poly;
                return Ok(StableLimit {
                    poly,
                    j: first,
                    monotone,
                    history,
                });
            }
        }
    }
    Err(Error::Guard(format!(
        "degree-{degree} truncation not stable by j = {max_j}"
    )))
}
