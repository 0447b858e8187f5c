//! Tensor products of crystal elements (signature rule) and the energy
//! functional on finite words.
//!
//! Factors of `b_m (x) .. (x) b_1` are stored right to left: `letters[0]`
//! is `b_1`. The signature rule follows the convention in which
//! `f_i(b1 (x) b2)` acts on `b1` iff `phi_i(b1) > eps_i(b2)`.

use crate::crystals::Crystal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub eps: i64,
    pub phi: i64,
    /// Written-order index of the factor `e_i` acts on.
    pub e_at: Option<usize>,
    /// Written-order index of the factor `f_i` acts on.
    pub f_at: Option<usize>,
}

/// Reduces `(eps, phi)` pairs given in written (left to right) order.
/// Each factor contributes `-^eps +^phi`; adjacent `+-` pairs cancel.
pub fn signature(pairs: &[(i64, i64)]) -> Signature {
    let mut minus: Vec<(usize, i64)> = Vec::new();
    let mut plus: Vec<(usize, i64)> = Vec::new();
    for (k, &(e, p)) in pairs.iter().enumerate() {
        let mut e = e;
        while e > 0 {
            match plus.last_mut() {
                Some(top) => {
                    let c = top.1.min(e);
                    top.1 -= c;
                    e -= c;
                    if top.1 == 0 {
                        plus.pop();
                    }
                }
                None => break,
            }
        }
        if e > 0 {
            minus.push((k, e));
        }
        if p > 0 {
            plus.push((k, p));
        }
    }
    Signature {
        eps: minus.iter().map(|m| m.1).sum(),
        phi: plus.iter().map(|p| p.1).sum(),
        e_at: minus.last().map(|m| m.0),
        f_at: plus.first().map(|p| p.0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorWord {
    /// `letters[k - 1] = b_k`.
    pub letters: Vec<usize>,
}

impl TensorWord {
    /// From factors listed right to left (`b_1` first).
    pub fn from_right(letters: Vec<usize>) -> Self {
        Self { letters }
    }

    /// From factors in written order (`b_m` first).
    pub fn from_written(mut letters: Vec<usize>) -> Self {
        letters.reverse();
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `b_k`, 1-based from the right.
    pub fn get(&self, k: usize) -> usize {
        self.letters[k - 1]
    }

    pub fn written(&self) -> Vec<usize> {
        self.letters.iter().rev().copied().collect()
    }

    /// Text form `b_m*..*b_1`.
    pub fn text(&self, crystal: &Crystal) -> String {
        word_text(crystal, &self.letters)
    }

    fn signature(&self, crystal: &Crystal, i: usize) -> Signature {
        let pairs: Vec<(i64, i64)> = self
            .letters
            .iter()
            .rev()
            .map(|&b| (crystal.eps(i, b), crystal.phi(i, b)))
            .collect();
        signature(&pairs)
    }

    pub fn eps(&self, crystal: &Crystal, i: usize) -> i64 {
        self.signature(crystal, i).eps
    }

    pub fn phi(&self, crystal: &Crystal, i: usize) -> i64 {
        self.signature(crystal, i).phi
    }

    /// Classical weight, the sum of the factor weights.
    pub fn wt(&self, crystal: &Crystal) -> Vec<i64> {
        let mut v = vec![0; crystal.size()];
        for &b in &self.letters {
            for (x, y) in v.iter_mut().zip(crystal.wt(b)) {
                *x += y;
            }
        }
        v
    }

    /// `e_i` applied to the word; the written position acted on is returned too.
    pub fn apply_e_at(&self, crystal: &Crystal, i: usize) -> Option<(TensorWord, usize)> {
        let k = self.signature(crystal, i).e_at?;
        let pos = self.len() - 1 - k;
        let mut out = self.clone();
        out.letters[pos] = crystal.e(i, self.letters[pos])?;
        Some((out, k))
    }

    pub fn apply_e(&self, crystal: &Crystal, i: usize) -> Option<TensorWord> {
        self.apply_e_at(crystal, i).map(|x| x.0)
    }

    pub fn apply_f(&self, crystal: &Crystal, i: usize) -> Option<TensorWord> {
        let k = self.signature(crystal, i).f_at?;
        let pos = self.len() - 1 - k;
        let mut out = self.clone();
        out.letters[pos] = crystal.f(i, self.letters[pos])?;
        Some(out)
    }
}

/// Text form of a right-to-left letter list.
pub fn word_text(crystal: &Crystal, letters: &[usize]) -> String {
    letters
        .iter()
        .rev()
        .map(|&b| crystal.label(b).to_string())
        .collect::<Vec<_>>()
        .join("*")
}

/// `E(b_{j+1} (x) .. (x) b_1) = sum_{i=1}^j i H(b_{i+1} (x) b_i)`.
pub fn word_energy(crystal: &Crystal, w: &TensorWord) -> i64 {
    energy_of(crystal, &w.letters)
}

/// Energy of a right-to-left letter list.
pub fn energy_of(crystal: &Crystal, letters: &[usize]) -> i64 {
    letters
        .windows(2)
        .enumerate()
        .map(|(k, pair)| (k as i64 + 1) * crystal.energy(pair[1], pair[0]))
        .sum()
}

/// `E(e_i^n w) - E(w)`, or `None` if `e_i^n w` vanishes.
pub fn energy_shift_under_e(crystal: &Crystal, i: usize, w: &TensorWord, n: usize) -> Option<i64> {
    let mut cur = w.clone();
    for _ in 0..n {
        cur = cur.apply_e(crystal, i)?;
    }
    Some(word_energy(crystal, &cur) - word_energy(crystal, w))
}
