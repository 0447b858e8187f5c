//! The level-1 perfect crystals of the six families, the level-`l`
//! symmetric tensor crystal of type A (classical arrows only), and
//! perfectness checks.
//!
//! Elements are addressed by their index in the alphabet order; all
//! crystal data is stored in dense tables.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::weights::{AffineType, CartanData, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `k`, including the letter `0`.
    Num(u32),
    /// `k` with a bar.
    Bar(u32),
    Phi,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Num(k) => write!(f, "{k}"),
            Letter::Bar(k) => write!(f, "{k}~"),
            Letter::Phi => write!(f, "phi"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Letter(Letter),
    /// Weakly increasing word for the symmetric tensor crystal.
    Row(Vec<u32>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Letter(l) => write!(f, "{l}"),
            Label::Row(r) => write!(f, "[{}]", r.iter().join(",")),
        }
    }
}

/// A finite crystal with energy function. `f[i][b]` is the index of
/// `f_i b` or `None`.
#[derive(Debug, Clone)]
pub struct Crystal {
    cartan: CartanData,
    level: i64,
    labels: Vec<Label>,
    f: Vec<Vec<Option<usize>>>,
    e: Vec<Vec<Option<usize>>>,
    eps: Vec<Vec<i64>>,
    phi: Vec<Vec<i64>>,
    wt: Vec<Vec<i64>>,
    energy: Vec<Vec<i64>>,
    classical_only: bool,
}

impl Crystal {
    pub fn ty(&self) -> AffineType {
        self.cartan.ty
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// Number of Dynkin nodes `n + 1`.
    pub fn size(&self) -> usize {
        self.cartan.size()
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn classical_only(&self) -> bool {
        self.classical_only
    }

    /// Dynkin indices carrying arrows.
    pub fn arrow_indices(&self) -> std::ops::Range<usize> {
        if self.classical_only {
            1..self.size()
        } else {
            0..self.size()
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn label(&self, b: usize) -> &Label {
        &self.labels[b]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Looks up an element by its text form (`"2"`, `"2~"`, `"phi"`, `"[0,1]"`).
    pub fn parse_element(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        self.labels
            .iter()
            .position(|l| l.to_string() == s)
            .ok_or_else(|| Error::Domain(format!("`{s}` is not an element of the crystal")))
    }

    pub fn f(&self, i: usize, b: usize) -> Option<usize> {
        self.f[i][b]
    }

    pub fn e(&self, i: usize, b: usize) -> Option<usize> {
        self.e[i][b]
    }

    pub fn eps(&self, i: usize, b: usize) -> i64 {
        self.eps[b][i]
    }

    pub fn phi(&self, i: usize, b: usize) -> i64 {
        self.phi[b][i]
    }

    pub fn eps_vec(&self, b: usize) -> &[i64] {
        &self.eps[b]
    }

    pub fn phi_vec(&self, b: usize) -> &[i64] {
        &self.phi[b]
    }

    /// Classical weight of `b` as Lambda-coordinates.
    pub fn wt(&self, b: usize) -> &[i64] {
        &self.wt[b]
    }

    /// Energy `H(b (x) b')`.
    pub fn energy(&self, b: usize, b2: usize) -> i64 {
        self.energy[b][b2]
    }

    pub fn max_abs_energy(&self) -> i64 {
        self.energy
            .iter()
            .flatten()
            .map(|h| h.abs())
            .max()
            .unwrap_or(0)
    }

    /// `f_i^n b`.
    pub fn f_pow(&self, i: usize, b: usize, n: i64) -> Option<usize> {
        (0..n).try_fold(b, |x, _| self.f(i, x))
    }

    pub fn e_pow(&self, i: usize, b: usize, n: i64) -> Option<usize> {
        (0..n).try_fold(b, |x, _| self.e(i, x))
    }

    /// Elements `b, f_i b, .., f_i^{phi_i(b)} b`.
    pub fn f_string(&self, i: usize, b: usize) -> Vec<usize> {
        let mut out = vec![b];
        let mut cur = b;
        while let Some(next) = self.f(i, cur) {
            out.push(next);
            cur = next;
        }
        out
    }

    fn from_tables(
        cartan: CartanData,
        level: i64,
        labels: Vec<Label>,
        f: Vec<Vec<Option<usize>>>,
        wt: Vec<Vec<i64>>,
        energy: Vec<Vec<i64>>,
        classical_only: bool,
    ) -> Self {
        let size = cartan.size();
        let len = labels.len();
        let mut e = vec![vec![None; len]; size];
        for i in 0..size {
            for b in 0..len {
                if let Some(t) = f[i][b] {
                    assert!(e[i][t].is_none(), "f_{i} is not injective");
                    e[i][t] = Some(b);
                }
            }
        }
        let count = |arrows: &Vec<Option<usize>>, b: usize| -> i64 {
            let mut k = 0;
            let mut cur = b;
            while let Some(n) = arrows[cur] {
                k += 1;
                cur = n;
            }
            k
        };
        let eps = (0..len)
            .map(|b| (0..size).map(|i| count(&e[i], b)).collect())
            .collect();
        let phi = (0..len)
            .map(|b| (0..size).map(|i| count(&f[i], b)).collect())
            .collect();
        Self {
            cartan,
            level,
            labels,
            f,
            e,
            eps,
            phi,
            wt,
            energy,
            classical_only,
        }
    }

    /// Graph in DOT format, nodes in alphabet order.
    pub fn to_dot(&self) -> String {
        let mut s = format!(
            "digraph crystal {{\n  label=\"{} n={} level {}\";\n",
            self.ty().family,
            self.ty().rank,
            self.level
        );
        for b in self.elements() {
            s.push_str(&format!("  n{b} [label=\"{}\"];\n", self.labels[b]));
        }
        for b in self.elements() {
            for i in self.arrow_indices() {
                if let Some(t) = self.f(i, b) {
                    s.push_str(&format!("  n{b} -> n{t} [label=\"{i}\"];\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Elem {
            label: String,
            weight: Vec<i64>,
            epsilon: Vec<i64>,
            phi: Vec<i64>,
        }
        let elements: Vec<Elem> = self
            .elements()
            .map(|b| Elem {
                label: self.labels[b].to_string(),
                weight: self.wt[b].clone(),
                epsilon: self.eps[b].clone(),
                phi: self.phi[b].clone(),
            })
            .collect();
        let mut arrows = Vec::new();
        for b in self.elements() {
            for i in self.arrow_indices() {
                if let Some(t) = self.f(i, b) {
                    arrows.push(json!({
                        "i": i,
                        "from": self.labels[b].to_string(),
                        "to": self.labels[t].to_string(),
                    }));
                }
            }
        }
        json!({
            "type": self.ty().family.tag(),
            "rank": self.ty().rank,
            "level": self.level,
            "elements": elements,
            "arrows": arrows,
            "energy": self.energy,
        })
    }

    /// Edge list as CSV: `i,from,to`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,from,to\n");
        for b in self.elements() {
            for i in self.arrow_indices() {
                if let Some(t) = self.f(i, b) {
                    s.push_str(&format!("{i},{},{}\n", self.labels[b], self.labels[t]));
                }
            }
        }
        s
    }
}

/// Classical weight `Lambda_a - Lambda_b`-style helper.
fn lam(size: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; size];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// Unbarred letter weight for the families with alphabet `1..n (0) n~..1~`.
fn letter_weight(family: Family, n: usize, b: usize) -> Vec<i64> {
    let s = n + 1;
    let generic = lam(s, &[(b, 1), (b - 1, -1)]);
    match family {
        Family::B1 => {
            if b == 2 {
                lam(s, &[(2, 1), (1, -1), (0, -1)])
            } else if b == n {
                lam(s, &[(n, 2), (n - 1, -1)])
            } else {
                generic
            }
        }
        Family::D1 => {
            if b == 2 {
                lam(s, &[(2, 1), (1, -1), (0, -1)])
            } else if b == n - 1 {
                lam(s, &[(n, 1), (n - 1, 1), (n - 2, -1)])
            } else {
                generic
            }
        }
        Family::A2Odd => {
            if b == 2 {
                lam(s, &[(2, 1), (1, -1), (0, -1)])
            } else {
                generic
            }
        }
        Family::A2Even => {
            if b == n {
                lam(s, &[(n, 2), (n - 1, -1)])
            } else {
                generic
            }
        }
        Family::D2 => {
            if b == 1 {
                lam(s, &[(1, 1), (0, -2)])
            } else if b == n {
                lam(s, &[(n, 2), (n - 1, -1)])
            } else {
                generic
            }
        }
        Family::A1 => unreachable!("type A uses its own alphabet"),
    }
}

/// Builds the level-1 perfect crystal of the given type.
pub fn build_crystal(ty: AffineType) -> Crystal {
    let cartan = ty.cartan_data();
    let n = ty.rank;
    let size = n + 1;
    let nn = n as u32;

    let letters: Vec<Letter> = match ty.family {
        Family::A1 => (0..=nn).map(Letter::Num).collect(),
        Family::D1 | Family::A2Odd => (1..=nn)
            .map(Letter::Num)
            .chain((1..=nn).rev().map(Letter::Bar))
            .collect(),
        Family::B1 | Family::A2Even => (1..=nn)
            .map(Letter::Num)
            .chain(std::iter::once(Letter::Num(0)))
            .chain((1..=nn).rev().map(Letter::Bar))
            .collect(),
        Family::D2 => (1..=nn)
            .map(Letter::Num)
            .chain(std::iter::once(Letter::Num(0)))
            .chain((1..=nn).rev().map(Letter::Bar))
            .chain(std::iter::once(Letter::Phi))
            .collect(),
    };
    let len = letters.len();
    let idx = |l: Letter| letters.iter().position(|&x| x == l).expect("letter in alphabet");
    let num = |k: usize| idx(Letter::Num(k as u32));
    let bar = |k: usize| idx(Letter::Bar(k as u32));

    let mut f = vec![vec![None; len]; size];
    let mut arrow = |i: usize, from: usize, to: usize| {
        assert!(f[i][from].is_none());
        f[i][from] = Some(to);
    };

    if ty.family == Family::A1 {
        for i in 1..=n {
            arrow(i, num(i - 1), num(i));
        }
        arrow(0, num(n), num(0));
    } else {
        for i in 1..n {
            arrow(i, num(i), num(i + 1));
            arrow(i, bar(i + 1), bar(i));
        }
        match ty.family {
            Family::B1 | Family::A2Even | Family::D2 => {
                arrow(n, num(n), num(0));
                arrow(n, num(0), bar(n));
            }
            Family::D1 => {
                arrow(n, num(n - 1), bar(n));
                arrow(n, num(n), bar(n - 1));
            }
            Family::A2Odd => arrow(n, num(n), bar(n)),
            Family::A1 => unreachable!(),
        }
        match ty.family {
            Family::B1 | Family::D1 | Family::A2Odd => {
                arrow(0, bar(1), num(2));
                arrow(0, bar(2), num(1));
            }
            Family::A2Even => arrow(0, bar(1), num(1)),
            Family::D2 => {
                arrow(0, bar(1), idx(Letter::Phi));
                arrow(0, idx(Letter::Phi), num(1));
            }
            Family::A1 => unreachable!(),
        }
    }

    let wt: Vec<Vec<i64>> = letters
        .iter()
        .map(|&l| match (ty.family, l) {
            (Family::A1, Letter::Num(b)) => {
                let b = b as usize;
                lam(size, &[((b + 1) % size, 1), (b, -1)])
            }
            (_, Letter::Num(0)) | (_, Letter::Phi) => vec![0; size],
            (fam, Letter::Num(b)) => letter_weight(fam, n, b as usize),
            (fam, Letter::Bar(b)) => neg(&letter_weight(fam, n, b as usize)),
        })
        .collect();

    let energy: Vec<Vec<i64>> = (0..len)
        .map(|x| (0..len).map(|y| level1_energy(ty, &letters, x, y)).collect())
        .collect();

    Crystal::from_tables(
        cartan,
        1,
        letters.into_iter().map(Label::Letter).collect(),
        f,
        wt,
        energy,
        false,
    )
}

/// `H(b (x) b')` for the level-1 crystals; `x`, `y` index the alphabet,
/// whose listing order is the letter order used by the energy rules.
fn level1_energy(ty: AffineType, letters: &[Letter], x: usize, y: usize) -> i64 {
    let n = ty.rank as u32;
    let (b, b2) = (letters[x], letters[y]);
    let ordered = if x >= y { 1 } else { 0 };
    match ty.family {
        Family::A1 => ordered,
        Family::B1 => match (b, b2) {
            (Letter::Num(0), Letter::Num(0)) => 0,
            (Letter::Num(1), Letter::Bar(1)) => -1,
            _ => ordered,
        },
        Family::D1 => match (b, b2) {
            (Letter::Num(k), Letter::Bar(m)) | (Letter::Bar(k), Letter::Num(m))
                if k == n && m == n =>
            {
                0
            }
            (Letter::Num(1), Letter::Bar(1)) => -1,
            _ => ordered,
        },
        Family::A2Odd => match (b, b2) {
            (Letter::Num(1), Letter::Bar(1)) => -1,
            _ => ordered,
        },
        Family::A2Even => match (b, b2) {
            (Letter::Num(0), Letter::Num(0)) => 0,
            _ => ordered,
        },
        Family::D2 => match (b, b2) {
            (Letter::Phi, Letter::Phi) | (Letter::Num(0), Letter::Num(0)) => 0,
            (Letter::Phi, _) | (_, Letter::Phi) => 1,
            _ => 2 * ordered,
        },
    }
}

/// The level-`l` symmetric tensor crystal of type `A_n^(1)`: weakly
/// increasing words over `0..=n`, with `f_i` (`i >= 1`) turning one letter
/// `i-1` into `i`. There are no 0-arrows.
pub fn build_symmetric_crystal(n: usize, l: usize) -> Result<Crystal> {
    if l == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    let ty = AffineType::new(Family::A1, n)?;
    let cartan = ty.cartan_data();
    let size = n + 1;
    let rows: Vec<Vec<u32>> = (0..=n as u32)
        .combinations_with_replacement(l)
        .collect();
    let len = rows.len();
    let pos: BTreeMap<&Vec<u32>, usize> = rows.iter().enumerate().map(|(k, r)| (r, k)).collect();
    let mut f = vec![vec![None; len]; size];
    for (k, r) in rows.iter().enumerate() {
        for (i, fi) in f.iter_mut().enumerate().skip(1) {
            if let Some(p) = r.iter().position(|&x| x as usize == i - 1) {
                let mut t = r.clone();
                t[p] = i as u32;
                t.sort_unstable();
                fi[k] = Some(pos[&t]);
            }
        }
    }
    let wt: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![0; size];
            for &x in r {
                let x = x as usize;
                v[(x + 1) % size] += 1;
                v[x] -= 1;
            }
            v
        })
        .collect();
    let energy: Vec<Vec<i64>> = rows
        .iter()
        .map(|x| rows.iter().map(|y| symmetric_energy(x, y)).collect())
        .collect();
    Ok(Crystal::from_tables(
        cartan,
        l as i64,
        rows.into_iter().map(Label::Row).collect(),
        f,
        wt,
        energy,
        true,
    ))
}

/// `min over tau of sum_i [x_i >= y_tau(i)]`.
fn symmetric_energy(x: &[u32], y: &[u32]) -> i64 {
    (0..y.len())
        .permutations(y.len())
        .map(|tau| {
            x.iter()
                .zip(&tau)
                .filter(|(xi, &t)| **xi >= y[t])
                .count() as i64
        })
        .min()
        .unwrap_or(0)
}

/// Index of the element `b(l Lambda_0)`, the row of all `n`s.
pub fn symmetric_ground(crystal: &Crystal) -> usize {
    let n = crystal.ty().rank as u32;
    let l = crystal.level() as usize;
    crystal
        .index_of(&Label::Row(vec![n; l]))
        .expect("row of n's is present")
}

/// Outcome of the checkable perfectness conditions.
#[derive(Debug, Clone, Serialize)]
pub struct PerfectReport {
    pub ok: bool,
    pub failures: Vec<String>,
    /// `lambda -> b(lambda)` (element index), keyed by Lambda-coordinates.
    pub ground: BTreeMap<Vec<i64>, usize>,
    /// `lambda -> epsilon(b(lambda))`.
    pub sigma: BTreeMap<Vec<i64>, Vec<i64>>,
}

/// Checks: each level-`l` dominant weight is hit exactly once by `phi` and
/// once by `epsilon`; `<c, epsilon(b)> >= l`; the graph is connected.
pub fn verify_perfect(crystal: &Crystal, l: i64) -> Result<PerfectReport> {
    if crystal.classical_only() {
        return Err(Error::NotPerfect("crystal carries no 0-arrows".into()));
    }
    let cartan = crystal.cartan();
    let mut failures = Vec::new();
    let mut ground = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    for lambda in cartan.dominant_of_level(l) {
        let by_phi: Vec<usize> = crystal
            .elements()
            .filter(|&b| crystal.phi_vec(b) == lambda.lambda.as_slice())
            .collect();
        let by_eps: Vec<usize> = crystal
            .elements()
            .filter(|&b| crystal.eps_vec(b) == lambda.lambda.as_slice())
            .collect();
        if by_phi.len() != 1 {
            failures.push(format!(
                "{} elements with phi = {}",
                by_phi.len(),
                lambda
            ));
        }
        if by_eps.len() != 1 {
            failures.push(format!(
                "{} elements with epsilon = {}",
                by_eps.len(),
                lambda
            ));
        }
        if let Some(&b) = by_phi.first() {
            ground.insert(lambda.lambda.clone(), b);
            sigma.insert(lambda.lambda.clone(), crystal.eps_vec(b).to_vec());
        }
    }
    for b in crystal.elements() {
        let lev: i64 = crystal
            .eps_vec(b)
            .iter()
            .zip(&cartan.comarks)
            .map(|(x, a)| x * a)
            .sum();
        if lev < l {
            failures.push(format!("<c, epsilon({})> = {lev} < {l}", crystal.label(b)));
        }
    }
    if !is_connected(crystal) {
        failures.push("crystal graph is not connected".into());
    }
    Ok(PerfectReport {
        ok: failures.is_empty(),
        failures,
        ground,
        sigma,
    })
}

fn is_connected(crystal: &Crystal) -> bool {
    if crystal.is_empty() {
        return true;
    }
    let mut seen = vec![false; crystal.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        for i in crystal.arrow_indices() {
            for nb in [crystal.f(i, b), crystal.e(i, b)].into_iter().flatten() {
                if !seen[nb] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}
