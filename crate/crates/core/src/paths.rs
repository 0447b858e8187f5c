//! Ground-state paths, path weights and the finite path spaces
//! `P_j(b, mu)`.
//!
//! A path is kept as its finite part `p(1), .., p(j)`; positions above `j`
//! follow the ground state. The tail `.. (x) b_{j+2} (x) b_{j+1}` is the
//! highest weight element of weight `lambda_j` and enters the signature
//! rule as one factor with `eps = 0`, `phi_i = <lambda_j, h_i>`.

use itertools::Itertools;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::crystals::{verify_perfect, Crystal};
use crate::error::{Error, Result};
use crate::tensor::{energy_of, signature, word_text};
use crate::weights::Weight;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub lambda: Weight,
    /// `lambdas[k] = lambda_k` for one period of `sigma`.
    lambdas: Vec<Vec<i64>>,
    /// `bars[k] = b-bar_{k+1}` for one period.
    bars: Vec<usize>,
}

impl GroundState {
    pub fn new(crystal: &Crystal, lambda: &Weight) -> Result<Self> {
        if lambda.lambda.len() != crystal.size() {
            return Err(Error::WeightShape {
                got: lambda.lambda.len(),
                expected: crystal.size(),
            });
        }
        let level = crystal.cartan().level(lambda);
        if !lambda.is_dominant() || level != crystal.level() {
            return Err(Error::Domain(format!(
                "{lambda} is not dominant of level {}",
                crystal.level()
            )));
        }
        let report = verify_perfect(crystal, crystal.level())?;
        if !report.ok {
            return Err(Error::NotPerfect(report.failures.join("; ")));
        }
        let start = lambda.lambda.clone();
        let mut lambdas = vec![start.clone()];
        let mut bars = Vec::new();
        loop {
            let cur = lambdas.last().unwrap();
            bars.push(report.ground[cur]);
            let next = report.sigma[cur].clone();
            if next == start {
                break;
            }
            lambdas.push(next);
        }
        Ok(Self {
            lambda: lambda.cl(),
            lambdas,
            bars,
        })
    }

    pub fn period(&self) -> usize {
        self.bars.len()
    }

    /// `b-bar_k` for `k >= 1`.
    pub fn bar(&self, k: usize) -> usize {
        debug_assert!(k >= 1);
        self.bars[(k - 1) % self.bars.len()]
    }

    /// `lambda_k = sigma^k lambda`.
    pub fn lambda_at(&self, k: usize) -> &[i64] {
        &self.lambdas[k % self.lambdas.len()]
    }

    /// `c_j = sum_{i=1}^j i H(b-bar_{i+1} (x) b-bar_i)`.
    pub fn c(&self, crystal: &Crystal, j: usize) -> i64 {
        (1..=j)
            .map(|i| i as i64 * crystal.energy(self.bar(i + 1), self.bar(i)))
            .sum()
    }

    /// Ground-state letters `b-bar_1 .. b-bar_j` (right to left).
    pub fn bars_upto(&self, j: usize) -> Vec<usize> {
        (1..=j).map(|k| self.bar(k)).collect()
    }

    pub fn ground(&self) -> Path {
        Path { word: Vec::new() }
    }

    /// Builds a path from `p(1)..p(j)`, dropping top positions that agree
    /// with the ground state.
    pub fn path(&self, mut word: Vec<usize>) -> Path {
        while let Some(&top) = word.last() {
            if top == self.bar(word.len()) {
                word.pop();
            } else {
                break;
            }
        }
        Path { word }
    }

    /// Letters `p(1)..p(j)` padded with ground state up to length `j`.
    pub fn padded(&self, p: &Path, j: usize) -> Vec<usize> {
        let mut w = p.word.clone();
        while w.len() < j {
            w.push(self.bar(w.len() + 1));
        }
        w
    }

    /// Affine weight of a path.
    pub fn path_weight(&self, crystal: &Crystal, p: &Path) -> Weight {
        let j = p.word.len();
        let mut lambda = self.lambda.lambda.clone();
        for (k, &b) in p.word.iter().enumerate() {
            let g = self.bar(k + 1);
            for (x, (y, z)) in lambda.iter_mut().zip(crystal.wt(b).iter().zip(crystal.wt(g))) {
                *x += y - z;
            }
        }
        let mut ext = p.word.clone();
        ext.push(self.bar(j + 1));
        let ground = self.bars_upto(j + 1);
        let shift = energy_of(crystal, &ext) - energy_of(crystal, &ground);
        Weight {
            lambda,
            delta: Rational64::from(-shift),
        }
    }

    fn pairs(&self, crystal: &Crystal, i: usize, word: &[usize]) -> Vec<(i64, i64)> {
        let mut pairs = vec![(0, self.lambda_at(word.len())[i])];
        pairs.extend(
            word.iter()
                .rev()
                .map(|&b| (crystal.eps(i, b), crystal.phi(i, b))),
        );
        pairs
    }

    pub fn eps(&self, crystal: &Crystal, i: usize, p: &Path) -> i64 {
        signature(&self.pairs(crystal, i, &p.word)).eps
    }

    pub fn phi(&self, crystal: &Crystal, i: usize, p: &Path) -> i64 {
        signature(&self.pairs(crystal, i, &p.word)).phi
    }

    pub fn apply_e(&self, crystal: &Crystal, i: usize, p: &Path) -> Option<Path> {
        let sig = signature(&self.pairs(crystal, i, &p.word));
        let k = sig.e_at?;
        debug_assert!(k > 0, "the highest weight tail has eps = 0");
        let pos = p.word.len() - k;
        let mut w = p.word.clone();
        w[pos] = crystal.e(i, w[pos])?;
        Some(self.path(w))
    }

    pub fn apply_f(&self, crystal: &Crystal, i: usize, p: &Path) -> Option<Path> {
        let mut w = p.word.clone();
        loop {
            let sig = signature(&self.pairs(crystal, i, &w));
            let k = sig.f_at?;
            if k == 0 {
                let next = self.bar(w.len() + 1);
                w.push(next);
                continue;
            }
            let pos = w.len() - k;
            w[pos] = crystal.f(i, w[pos])?;
            return Some(self.path(w));
        }
    }

    pub fn text(&self, crystal: &Crystal, p: &Path) -> String {
        if p.word.is_empty() {
            "ground".to_string()
        } else {
            word_text(crystal, &p.word)
        }
    }

    pub fn to_json(&self, crystal: &Crystal, p: &Path) -> PathJson {
        PathJson {
            j: p.word.len(),
            word: p
                .word
                .iter()
                .rev()
                .map(|&b| crystal.label(b).to_string())
                .collect(),
            weight: self.path_weight(crystal, p),
        }
    }
}

/// A path through its finite part; `word[k - 1] = p(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathJson {
    pub j: usize,
    pub word: Vec<String>,
    pub weight: Weight,
}

/// All words `b (x) b_j (x) .. (x) b_1` with `wt(b_j (x) .. (x) b_1) = mu`
/// (classical coordinates). Returned right to left, without the top
/// letter `b`, in lexicographic order of the written word.
pub fn enumerate_pj(crystal: &Crystal, mu: &[i64], j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return if mu.iter().all(|&x| x == 0) {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let firsts: Vec<usize> = crystal.elements().collect();
    let mut out: Vec<Vec<usize>> = firsts
        .par_iter()
        .flat_map_iter(|&top| {
            let mut acc = Vec::new();
            let mut rest = mu.to_vec();
            for (x, y) in rest.iter_mut().zip(crystal.wt(top)) {
                *x -= y;
            }
            for tail in (0..j - 1)
                .map(|_| crystal.elements())
                .multi_cartesian_product()
            {
                let mut sum = vec![0i64; crystal.size()];
                for &b in &tail {
                    for (x, y) in sum.iter_mut().zip(crystal.wt(b)) {
                        *x += y;
                    }
                }
                if sum == rest {
                    let mut w: Vec<usize> = tail.into_iter().rev().collect();
                    w.push(top);
                    acc.push(w);
                }
            }
            acc
        })
        .collect();
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}
