//! Affine weight lattice, Cartan data for the six supported families,
//! affine Weyl group elements and formal characters.
//!
//! A weight is `sum_i m_i Lambda_i + k delta` stored as the integer vector
//! `m` (indexed by `I = {0..n}`) and a rational `k`. The pairing
//! `<mu, h_i>` is simply `m_i`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qring::LaurentPoly;

/// The six affine families. `A2Even` uses the reversed node labelling in
/// which `Lambda_n` is the unique level-1 dominant weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// A_n^(1)
    A1,
    /// B_n^(1)
    B1,
    /// D_n^(1)
    D1,
    /// A_{2n-1}^(2)
    A2Odd,
    /// A_{2n}^(2)
    A2Even,
    /// D_{n+1}^(2)
    D2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::A1,
        Family::B1,
        Family::D1,
        Family::A2Odd,
        Family::A2Even,
        Family::D2,
    ];

    pub fn min_rank(self) -> usize {
        match self {
            Family::A1 | Family::A2Even => 1,
            Family::D2 => 2,
            Family::B1 | Family::A2Odd => 3,
            Family::D1 => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::A1 => "A1",
            Family::B1 => "B1",
            Family::D1 => "D1",
            Family::A2Odd => "A2odd",
            Family::A2Even => "A2even",
            Family::D2 => "D2",
        }
    }

    fn rank_bound(self) -> &'static str {
        match self {
            Family::A1 | Family::A2Even => "rank must be >= 1",
            Family::D2 => "rank must be >= 2",
            Family::B1 | Family::A2Odd => "rank must be >= 3",
            Family::D1 => "rank must be >= 4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A1" | "A1n" | "a1" => Ok(Family::A1),
            "B1" | "B1n" | "b1" => Ok(Family::B1),
            "D1" | "D1n" | "d1" => Ok(Family::D1),
            "A2odd" | "A2_2n_minus_1" | "a2odd" => Ok(Family::A2Odd),
            "A2even" | "A2_2n" | "a2even" => Ok(Family::A2Even),
            "D2" | "D2_n_plus_1" | "d2" => Ok(Family::D2),
            other => Err(Error::UnknownType(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineType {
    pub family: Family,
    pub rank: usize,
}

impl AffineType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if rank < family.min_rank() {
            return Err(Error::InvalidRank {
                family: family.tag(),
                rank,
                bound: family.rank_bound(),
            });
        }
        Ok(Self { family, rank })
    }

    pub fn minimal(family: Family) -> Self {
        Self {
            family,
            rank: family.min_rank(),
        }
    }

    /// Number of nodes, `n + 1`.
    pub fn size(&self) -> usize {
        self.rank + 1
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i > self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn cartan_data(&self) -> CartanData {
        CartanData::new(*self)
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.family, self.rank)
    }
}

/// An affine weight `sum m_i Lambda_i + k delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub lambda: Vec<i64>,
    pub delta: Rational64,
}

impl Weight {
    pub fn zero(size: usize) -> Self {
        Self {
            lambda: vec![0; size],
            delta: Rational64::zero(),
        }
    }

    pub fn classical(lambda: Vec<i64>) -> Self {
        Self {
            lambda,
            delta: Rational64::zero(),
        }
    }

    pub fn fundamental(size: usize, i: usize) -> Self {
        let mut w = Self::zero(size);
        w.lambda[i] = 1;
        w
    }

    pub fn null_root(size: usize) -> Self {
        Self {
            lambda: vec![0; size],
            delta: Rational64::one(),
        }
    }

    /// `rho = sum_i Lambda_i`.
    pub fn rho(size: usize) -> Self {
        Self::classical(vec![1; size])
    }

    pub fn pair(&self, i: usize) -> i64 {
        self.lambda[i]
    }

    pub fn level(&self, comarks: &[i64]) -> i64 {
        self.lambda.iter().zip(comarks).map(|(m, a)| m * a).sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.lambda.iter().all(|&m| m >= 0)
    }

    /// Projection to `P_cl` (drops the delta part).
    pub fn cl(&self) -> Weight {
        Weight::classical(self.lambda.clone())
    }

    pub fn with_delta(mut self, delta: Rational64) -> Self {
        self.delta = delta;
        self
    }

    pub fn add_delta(mut self, k: Rational64) -> Self {
        self.delta += k;
        self
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight {
            lambda: self.lambda.iter().map(|m| m * k).collect(),
            delta: self.delta * k,
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.lambda.len(), other.lambda.len());
        Weight {
            lambda: self
                .lambda
                .iter()
                .zip(&other.lambda)
                .map(|(a, b)| a + b)
                .collect(),
            delta: self.delta + other.delta,
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.scaled(-1))
    }

    /// Adds a classical coordinate vector.
    pub fn add_classical(&self, lambda: &[i64]) -> Weight {
        Weight {
            lambda: self.lambda.iter().zip(lambda).map(|(a, b)| a + b).collect(),
            delta: self.delta,
        }
    }

    /// The delta coordinate as a doubled integer; panics if the
    /// denominator does not divide 2.
    pub fn doubled_delta(&self) -> i64 {
        let d = self.delta * 2;
        assert!(d.is_integer(), "delta coordinate {} is not a half-integer", self.delta);
        d.to_integer()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: String, name: String| -> fmt::Result {
            let neg = c.starts_with('-');
            let mag = c.trim_start_matches('-');
            let mag = if mag == "1" { String::new() } else { mag.to_string() };
            if first {
                write!(f, "{}{}{}", if neg { "-" } else { "" }, mag, name)?;
            } else {
                write!(f, " {} {}{}", if neg { '-' } else { '+' }, mag, name)?;
            }
            first = false;
            Ok(())
        };
        for (i, m) in self.lambda.iter().enumerate() {
            if *m != 0 {
                term(f, m.to_string(), format!("L{i}"))?;
            }
        }
        if !self.delta.is_zero() {
            term(f, self.delta.to_string(), "d".into())?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    lambda: Vec<i64>,
    delta: [i64; 2],
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightRepr {
            lambda: self.lambda.clone(),
            delta: [*self.delta.numer(), *self.delta.denom()],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WeightRepr::deserialize(d)?;
        if r.delta[1] == 0 {
            return Err(serde::de::Error::custom("zero denominator in delta"));
        }
        Ok(Weight {
            lambda: r.lambda,
            delta: Rational64::new(r.delta[0], r.delta[1]),
        })
    }
}

/// Cartan matrix, marks, comarks and simple roots of an affine type.
///
/// `matrix[i][j] = <h_i, alpha_j>`. Simple roots are
/// `alpha_j = sum_i matrix[i][j] Lambda_i + delta_{j0} delta` (every
/// supported labelling has `a_0 = 1`).
#[derive(Debug, Clone)]
pub struct CartanData {
    pub ty: AffineType,
    pub matrix: Vec<Vec<i64>>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub alpha: Vec<Weight>,
}

impl CartanData {
    pub fn new(ty: AffineType) -> Self {
        let n = ty.rank;
        let size = n + 1;
        let mut a = vec![vec![0i64; size]; size];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        let (marks, comarks): (Vec<i64>, Vec<i64>);
        match ty.family {
            Family::A1 => {
                if n == 1 {
                    link(0, 1, -2, -2);
                } else {
                    for i in 0..size {
                        link(i, (i + 1) % size, -1, -1);
                    }
                }
                marks = vec![1; size];
                comarks = vec![1; size];
            }
            Family::B1 => {
                link(0, 2, -1, -1);
                for i in 1..n - 1 {
                    link(i, i + 1, -1, -1);
                }
                // alpha_n short
                link(n - 1, n, -1, -2);
                marks = (0..size).map(|i| if i <= 1 { 1 } else { 2 }).collect();
                comarks = (0..size)
                    .map(|i| if i <= 1 || i == n { 1 } else { 2 })
                    .collect();
            }
            Family::D1 => {
                link(0, 2, -1, -1);
                for i in 1..n - 1 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 2, n, -1, -1);
                marks = (0..size)
                    .map(|i| if i <= 1 || i >= n - 1 { 1 } else { 2 })
                    .collect();
                comarks = marks.clone();
            }
            Family::A2Odd => {
                link(0, 2, -1, -1);
                for i in 1..n - 1 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 1, n, -2, -1);
                marks = (0..size)
                    .map(|i| if i <= 1 || i == n { 1 } else { 2 })
                    .collect();
                comarks = (0..size).map(|i| if i <= 1 { 1 } else { 2 }).collect();
            }
            Family::A2Even => {
                if n == 1 {
                    link(0, 1, -1, -4);
                } else {
                    link(0, 1, -1, -2);
                    for i in 1..n - 1 {
                        link(i, i + 1, -1, -1);
                    }
                    link(n - 1, n, -1, -2);
                }
                marks = (0..size).map(|i| if i == 0 { 1 } else { 2 }).collect();
                comarks = (0..size).map(|i| if i == n { 1 } else { 2 }).collect();
            }
            Family::D2 => {
                if n == 2 {
                    a[0][1] = -2;
                    a[1][0] = -1;
                    a[1][2] = -1;
                    a[2][1] = -2;
                } else {
                    link(0, 1, -2, -1);
                    for i in 1..n - 1 {
                        link(i, i + 1, -1, -1);
                    }
                    link(n - 1, n, -1, -2);
                }
                marks = vec![1; size];
                comarks = (0..size)
                    .map(|i| if i == 0 || i == n { 1 } else { 2 })
                    .collect();
            }
        }
        let alpha = (0..size)
            .map(|j| Weight {
                lambda: (0..size).map(|i| a[i][j]).collect(),
                delta: if j == 0 {
                    Rational64::new(1, marks[0])
                } else {
                    Rational64::zero()
                },
            })
            .collect();
        Self {
            ty,
            matrix: a,
            marks,
            comarks,
            alpha,
        }
    }

    pub fn size(&self) -> usize {
        self.ty.size()
    }

    /// Classical simple root `cl(alpha_i)` as a coordinate vector.
    pub fn cl_alpha(&self, i: usize) -> &[i64] {
        &self.alpha[i].lambda
    }

    pub fn level(&self, mu: &Weight) -> i64 {
        mu.level(&self.comarks)
    }

    /// `r_i(mu) = mu - <mu, h_i> alpha_i`.
    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        let m = mu.pair(i);
        if m == 0 {
            return mu.clone();
        }
        mu.sub(&self.alpha[i].scaled(m))
    }

    /// Reflection on the finite coordinates `1..=n` only (classical Weyl
    /// group acting on weights modulo `Lambda_0`).
    pub fn reflect_finite(&self, i: usize, mu: &[i64]) -> Vec<i64> {
        debug_assert!(i >= 1);
        let m = mu[i - 1];
        mu.iter()
            .enumerate()
            .map(|(k, x)| x - m * self.matrix[k + 1][i])
            .collect()
    }

    /// All dominant classical weights of the given level.
    pub fn dominant_of_level(&self, level: i64) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.size()];
        fn rec(
            idx: usize,
            remaining: i64,
            comarks: &[i64],
            cur: &mut Vec<i64>,
            out: &mut Vec<Weight>,
        ) {
            if idx == comarks.len() {
                if remaining == 0 {
                    out.push(Weight::classical(cur.clone()));
                }
                return;
            }
            let mut m = 0;
            while m * comarks[idx] <= remaining {
                cur[idx] = m;
                rec(idx + 1, remaining - m * comarks[idx], comarks, cur, out);
                m += 1;
            }
            cur[idx] = 0;
        }
        rec(0, level, &self.comarks, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Symmetrising factors `s_i` with `(alpha_i, alpha_j) = s_i A_ij`,
    /// normalised so that `(alpha_0, alpha_0) = 2`.
    pub fn symmetrizer(&self) -> Vec<Rational64> {
        let base = Rational64::new(self.comarks[0], self.marks[0]);
        (0..self.size())
            .map(|i| Rational64::new(self.comarks[i], self.marks[i]) / base)
            .collect()
    }

    /// Norm of the finite part of a classical weight under the invariant
    /// form, computed as `y^T (S A_fin) y` with `A_fin y = m_fin`.
    pub fn finite_norm(&self, m_fin: &[i64]) -> Rational64 {
        let n = self.ty.rank;
        let a_fin: Vec<Vec<Rational64>> = (1..=n)
            .map(|i| (1..=n).map(|j| Rational64::from(self.matrix[i][j])).collect())
            .collect();
        let rhs: Vec<Rational64> = m_fin.iter().map(|&x| Rational64::from(x)).collect();
        let y = solve_rational(a_fin, rhs).expect("finite Cartan matrix is invertible");
        let s = self.symmetrizer();
        let mut total = Rational64::zero();
        for i in 0..n {
            for j in 0..n {
                total += y[i] * s[i + 1] * Rational64::from(self.matrix[i + 1][j + 1]) * y[j];
            }
        }
        total
    }

    /// For `big` of positive level with zero delta part: the delta
    /// coordinate any point of its affine Weyl orbit must have when its
    /// classical part is `target` (orbit points share the invariant norm).
    pub fn orbit_delta(&self, big: &Weight, target: &[i64]) -> Rational64 {
        let level = self.level(big);
        assert!(level > 0, "orbit delta needs positive level");
        let q_big = self.finite_norm(&big.lambda[1..]);
        let q_t = self.finite_norm(&target[1..]);
        (q_big - q_t) * self.comarks[0] / (2 * level)
    }
}

fn solve_rational(mut a: Vec<Vec<Rational64>>, mut b: Vec<Rational64>) -> Option<Vec<Rational64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] *= inv;
        }
        b[col] *= inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in col..n {
                    let t = a[col][k];
                    a[r][k] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some(b)
}

/// An element of the (affine or classical) Weyl group.
///
/// `word = [i_1, .., i_k]` denotes `r_{i_k} ... r_{i_1}`, matching the
/// left-multiplication order of the Demazure schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// Action on `(m_0, .., m_n, k)` coordinates; last row is the delta row.
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
}

impl WeylElement {
    pub fn identity(size: usize) -> Self {
        let mut matrix = vec![vec![0i64; size + 1]; size + 1];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self {
            word: Vec::new(),
            matrix,
            det: 1,
        }
    }

    pub fn from_word(cartan: &CartanData, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(cartan.size()), |w, &i| w.left_mul(cartan, i))
    }

    /// `r_i * self`.
    pub fn left_mul(&self, cartan: &CartanData, i: usize) -> Self {
        let size = cartan.size();
        let a0 = cartan.alpha[i].delta;
        assert!(a0.is_integer(), "non-integral delta part of a simple root");
        let c_i = a0.to_integer();
        let mut m = self.matrix.clone();
        // new row r = row r - A[r][i] * row i (for lambda rows), delta row uses c_i
        let row_i = self.matrix[i].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let coef = if r < size { cartan.matrix[r][i] } else { c_i };
            if coef != 0 {
                for (x, y) in row.iter_mut().zip(&row_i) {
                    *x -= coef * y;
                }
            }
        }
        let mut word = self.word.clone();
        word.push(i);
        Self {
            word,
            matrix: m,
            det: -self.det,
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, mu: &Weight) -> Weight {
        let size = mu.lambda.len();
        let lambda = (0..size)
            .map(|r| (0..size).map(|c| self.matrix[r][c] * mu.lambda[c]).sum())
            .collect();
        let shift: i64 = (0..size).map(|c| self.matrix[size][c] * mu.lambda[c]).sum();
        Weight {
            lambda,
            delta: mu.delta * self.matrix[size][size] + shift,
        }
    }

    /// `w^{-1}(alpha_i)` in the simple-root basis.
    pub fn inverse_on_root(&self, cartan: &CartanData, i: usize) -> Vec<i64> {
        let mut c = vec![0i64; cartan.size()];
        c[i] = 1;
        for &j in self.word.iter().rev() {
            let pairing: i64 = (0..c.len()).map(|k| c[k] * cartan.matrix[j][k]).sum();
            c[j] -= pairing;
        }
        c
    }
}

/// True iff `r_i w` is longer than `w`, i.e. `w^{-1}(alpha_i)` is positive.
pub fn is_bruhat_ascent(cartan: &CartanData, i: usize, w: &WeylElement) -> bool {
    cartan.ty.check_index(i).expect("index in range");
    let c = w.inverse_on_root(cartan, i);
    c.iter().all(|&x| x >= 0)
}

/// All group elements of length `<= max_length`, in breadth-first order
/// (so lengths are nondecreasing), each with a reduced word.
pub fn enumerate_weyl(cartan: &CartanData, classical_only: bool, max_length: usize) -> Vec<WeylElement> {
    let gens: Vec<usize> = cartan
        .ty
        .indices()
        .filter(|&i| !(classical_only && i == 0))
        .collect();
    let id = WeylElement::identity(cartan.size());
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    seen.insert(id.matrix.clone());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        if w.length() >= max_length {
            continue;
        }
        for &i in &gens {
            let next = w.left_mul(cartan, i);
            if seen.insert(next.matrix.clone()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Groups a breadth-first enumeration into length shells.
pub fn weyl_shells(elements: Vec<WeylElement>) -> Vec<Vec<WeylElement>> {
    let mut shells: Vec<Vec<WeylElement>> = Vec::new();
    for w in elements {
        let l = w.length();
        while shells.len() <= l {
            shells.push(Vec::new());
        }
        shells[l].push(w);
    }
    shells
}

/// Finite formal sum of exponentials `e^mu` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalCharacter {
    terms: BTreeMap<Weight, BigInt>,
}

impl FormalCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn exp(mu: Weight) -> Self {
        let mut c = Self::new();
        c.add_term(mu, BigInt::one());
        c
    }

    pub fn add_term(&mut self, mu: Weight, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mu.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mu);
        }
    }

    pub fn add_assign(&mut self, other: &FormalCharacter) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::new();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    /// Multiplies by `e^nu`.
    pub fn shift(&self, nu: &Weight) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.add(nu), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &FormalCharacter) -> Self {
        let mut out = Self::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Weight) -> BigInt {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    /// Sum of all coefficients (dimension for honest characters).
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Applies a coordinate permutation `lambda'[perm[i]] = lambda[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Self::new();
        for (w, c) in &self.terms {
            let mut lambda = vec![0; w.lambda.len()];
            for (i, m) in w.lambda.iter().enumerate() {
                lambda[perm[i]] = *m;
            }
            out.add_term(Weight { lambda, delta: w.delta }, c.clone());
        }
        out
    }

    /// Specialisation `e^{-delta} -> q`: one polynomial per classical part.
    pub fn specialize(&self) -> BTreeMap<Vec<i64>, LaurentPoly> {
        let mut out: BTreeMap<Vec<i64>, LaurentPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            let term = LaurentPoly::half_monomial(-w.doubled_delta(), c.clone());
            *out.entry(w.lambda.clone()).or_default() += &term;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }
}

#[derive(Serialize)]
struct CharTermRepr<'a> {
    weight: &'a Weight,
    coeff: String,
}

impl Serialize for FormalCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&CharTermRepr {
                weight: w,
                coeff: c.to_string(),
            })?;
        }
        seq.end()
    }
}

/// Demazure operator
/// `D_i e^mu = (e^{mu+rho} - e^{r_i(mu+rho)}) / (1 - e^{-alpha_i}) * e^{-rho}`
/// in closed geometric form, extended linearly.
pub fn demazure_op(cartan: &CartanData, i: usize, chi: &FormalCharacter) -> FormalCharacter {
    let alpha = &cartan.alpha[i];
    let mut out = FormalCharacter::new();
    for (mu, c) in chi.iter() {
        let m = mu.pair(i) + 1;
        if m > 0 {
            for t in 0..m {
                out.add_term(mu.sub(&alpha.scaled(t)), c.clone());
            }
        } else if m < 0 {
            for t in 1..=-m {
                out.add_term(mu.add(&alpha.scaled(t)), -c.clone());
            }
        }
    }
    out
}
