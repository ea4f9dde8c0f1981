//! Words in the monoids M_k (Ritt swaps), B_k (swaps plus skew-twists) and G_k (border
//! guards), their permutation representation, and canonical and normal forms.
//!
//! Letters are written left to right and act right to left: in `t2 t1` the swap `t1` happens
//! first. `t_i` exchanges positions `i` and `i + 1`, position 1 being the innermost factor.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    T(usize),
    /// Skew-twist moving the innermost factor outside.
    Phi,
    /// Inverse skew-twist.
    Beta,
    /// Border guard `t_{k-1} φ`.
    Psi,
    /// Border guard `β t_{k-1}`.
    Gamma,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::T(i) => write!(f, "t{i}"),
            Letter::Phi => write!(f, "f"),
            Letter::Beta => write!(f, "b"),
            Letter::Psi => write!(f, "p"),
            Letter::Gamma => write!(f, "g"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Alphabet {
    M,
    B,
    G,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("bad token '{0}'")]
    BadToken(String),
    #[error("letter {letter} not allowed in {alphabet:?}_{k}")]
    LetterOutOfRange { letter: String, alphabet: Alphabet, k: usize },
    #[error("block sizes {0:?} do not sum to k = {1}")]
    BadBlocks(Vec<usize>, usize),
    #[error("rank k must be at least 1")]
    ZeroRank,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    k: usize,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(letters: Vec<Letter>, k: usize, alphabet: Alphabet) -> Result<Self, WordError> {
        if k == 0 {
            return Err(WordError::ZeroRank);
        }
        for l in &letters {
            let ok = match (alphabet, l) {
                (Alphabet::M, Letter::T(i)) | (Alphabet::B, Letter::T(i)) => *i >= 1 && *i < k,
                (Alphabet::B, Letter::Phi | Letter::Beta) => true,
                (Alphabet::G, Letter::T(i)) => *i >= 1 && *i + 2 <= k,
                (Alphabet::G, Letter::Psi | Letter::Gamma) => true,
                _ => false,
            };
            if !ok {
                return Err(WordError::LetterOutOfRange { letter: l.to_string(), alphabet, k });
            }
        }
        Ok(Word { letters, k, alphabet })
    }

    pub fn empty(k: usize, alphabet: Alphabet) -> Self {
        Word { letters: vec![], k, alphabet }
    }

    /// Parses whitespace-separated tokens `t<i>`, `f`, `b`, `p`, `g`.
    pub fn parse(text: &str, k: usize, alphabet: Alphabet) -> Result<Self, WordError> {
        let letters = text.split_whitespace().map(Letter::from_str).collect::<Result<Vec<_>, _>>()?;
        Word::new(letters, k, alphabet)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Swap positions (indices of the `t` letters), in written order.
    pub fn positions(&self) -> Vec<usize> {
        self.letters.iter().filter_map(|l| if let Letter::T(i) = l { Some(*i) } else { None }).collect()
    }

    /// `self` followed (on the right) by `other`: `other` acts first.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, k: self.k, alphabet: self.alphabet }
    }

    /// Image in B_k of a G_k or M_k word.
    pub fn to_b(&self) -> Word {
        let k = self.k;
        let mut out = Vec::new();
        for l in &self.letters {
            match l {
                Letter::Psi => out.extend([Letter::T(k - 1), Letter::Phi]),
                Letter::Gamma => out.extend([Letter::Beta, Letter::T(k - 1)]),
                other => out.push(*other),
            }
        }
        Word { letters: out, k, alphabet: Alphabet::B }
    }
}

impl FromStr for Letter {
    type Err = WordError;
    fn from_str(tok: &str) -> Result<Self, WordError> {
        match tok {
            "f" => Ok(Letter::Phi),
            "b" => Ok(Letter::Beta),
            "p" => Ok(Letter::Psi),
            "g" => Ok(Letter::Gamma),
            t if t.starts_with('t') => t[1..]
                .parse::<usize>()
                .map(Letter::T)
                .map_err(|_| WordError::BadToken(tok.into())),
            _ => Err(WordError::BadToken(tok.into())),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Bijection of {1..k}; `images[j-1]` is the final position of the factor starting at `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (1..=k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let k = images.len();
        let mut seen = vec![false; k + 1];
        for &v in &images {
            if v == 0 || v > k || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Permutation { images })
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    /// self ∘ other (other first).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&j| self.apply(j)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.k()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v - 1] = j + 1;
        }
        Permutation { images: inv }
    }

    pub fn inversions(&self) -> usize {
        let n = self.k();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.images[i] > self.images[j]).count()).sum()
    }

    /// Adjacent transposition (i i+1) in S_k.
    pub fn transposition(k: usize, i: usize) -> Self {
        let mut images: Vec<usize> = (1..=k).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// All permutations of {1..k} in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for v in 1..=k {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(cur, used, k, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; k + 1], k, &mut out);
        out
    }
}

/// Permutation represented by an M_k word (rightmost letter acts first).
pub fn permutation_of(w: &Word) -> Permutation {
    let k = w.k();
    let mut pos: Vec<usize> = (1..=k).collect();
    for l in w.letters().iter().rev() {
        if let Letter::T(i) = l {
            for p in pos.iter_mut() {
                if *p == *i {
                    *p = i + 1;
                } else if *p == i + 1 {
                    *p = *i;
                }
            }
        }
    }
    Permutation { images: pos }
}

/// The insert-sort word of a permutation: runs `(t_a ... t_b)` written with b increasing to
/// the right; the rightmost run acts first and inserts the factor starting at position b.
pub fn canonical_word_of(p: &Permutation) -> Word {
    let k = p.k();
    let mut letters = Vec::new();
    for b in 1..k {
        let c = (b + 1..=k).filter(|&i| p.apply(i) < p.apply(b)).count();
        for t in (b..b + c).rev() {
            letters.push(Letter::T(t));
        }
    }
    Word { letters, k, alphabet: Alphabet::M }
}

pub fn first_canonical_form(w: &Word) -> Word {
    canonical_word_of(&permutation_of(w))
}

/// Runs `(start, end)` of the first canonical form (each run descends from `start` to `end`).
pub fn runs(w: &Word) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for i in w.positions() {
        match out.last_mut() {
            Some((_, end)) if *end == i + 1 => *end = i,
            _ => out.push((i, i)),
        }
    }
    out
}

/// Merge-sort factorization `ŵ = v w_1 ... w_t`. Block 1 is innermost; the block words act on
/// disjoint positions and commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondCanonical {
    pub v: Word,
    /// One word per block, innermost block first.
    pub blocks: Vec<Word>,
}

impl SecondCanonical {
    pub fn to_word(&self) -> Word {
        let mut w = self.v.clone();
        for b in &self.blocks {
            w = w.concat(b);
        }
        w
    }
}

/// Block ranges (1-based inclusive), innermost block first.
fn block_ranges(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 1;
    for &r in sizes {
        out.push((start, start + r - 1));
        start += r;
    }
    out
}

pub fn second_canonical_form(w: &Word, sizes: &[usize]) -> Result<SecondCanonical, WordError> {
    let k = w.k();
    if sizes.iter().sum::<usize>() != k || sizes.contains(&0) {
        return Err(WordError::BadBlocks(sizes.to_vec(), k));
    }
    let p = permutation_of(w);
    let ranges = block_ranges(sizes);
    // within-block sort: factor j goes to the slot of its rank (by final position) in its block
    let mut inner = vec![0usize; k];
    for &(lo, hi) in &ranges {
        let mut members: Vec<usize> = (lo..=hi).collect();
        members.sort_by_key(|&j| p.apply(j));
        for (slot, &j) in members.iter().enumerate() {
            inner[j - 1] = lo + slot;
        }
    }
    let inner = Permutation { images: inner };
    let v = p.compose(&inner.inverse());
    let blocks = ranges
        .iter()
        .map(|&(lo, hi)| {
            let images: Vec<usize> = (1..=k).map(|j| if j >= lo && j <= hi { inner.apply(j) } else { j }).collect();
            canonical_word_of(&Permutation { images })
        })
        .collect();
    Ok(SecondCanonical { v: canonical_word_of(&v), blocks })
}

/// True when no two factors from the same block are exchanged by `v`.
pub fn preserves_block_order(v: &Word, sizes: &[usize]) -> bool {
    let p = permutation_of(v);
    block_ranges(sizes)
        .iter()
        .all(|&(lo, hi)| (lo..hi).all(|j| p.apply(j) < p.apply(j + 1)))
}

/// Normal form `φ^{mk} u` (prefix > 0), `β^{nk} u` (prefix < 0) or `u`, with `u` free of β
/// and of φ^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BNormalForm {
    /// Signed exponent: positive for φ, negative for β; always a multiple of k.
    pub prefix: i64,
    pub u: Word,
}

fn prefix_letters(prefix: i64) -> Vec<Letter> {
    let l = if prefix >= 0 { Letter::Phi } else { Letter::Beta };
    vec![l; prefix.unsigned_abs() as usize]
}

impl BNormalForm {
    pub fn to_word(&self) -> Word {
        let mut letters = prefix_letters(self.prefix);
        letters.extend_from_slice(self.u.letters());
        Word { letters, k: self.u.k(), alphabet: Alphabet::B }
    }
}

pub fn bword_normal_form(w: &Word) -> BNormalForm {
    let k = w.k();
    let w = w.to_b();
    // β ≈ β^k φ^{k-1}; the β^k commute with everything and move to the front
    let mut betas_k: i64 = 0;
    let mut body: Vec<Letter> = Vec::new();
    for l in w.letters() {
        match l {
            Letter::Beta => {
                betas_k += 1;
                body.extend(std::iter::repeat_n(Letter::Phi, k - 1));
            }
            other => body.push(*other),
        }
    }
    let mut phis_k: i64 = 0;
    loop {
        let mut changed = false;
        // t_i φ -> φ t_{i+1} for i < k - 1
        for idx in 0..body.len().saturating_sub(1) {
            if let (Letter::T(i), Letter::Phi) = (body[idx], body[idx + 1]) {
                if i + 1 < k {
                    body[idx] = Letter::Phi;
                    body[idx + 1] = Letter::T(i + 1);
                    changed = true;
                }
            }
        }
        // strip φ^k
        let mut idx = 0;
        while idx + k <= body.len() {
            if body[idx..idx + k].iter().all(|l| *l == Letter::Phi) {
                body.drain(idx..idx + k);
                phis_k += 1;
                changed = true;
            } else {
                idx += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let prefix = (phis_k - betas_k) * k as i64;
    BNormalForm { prefix, u: Word { letters: body, k, alphabet: Alphabet::B } }
}

/// `w ≈ φ^N w'` (prefix = N > 0) or `β^{-N} w'` with `w'` in G_k, plus the split `w' ≈ w2 w1`
/// with no γ in `w1` and no ψ in `w2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorderGuardForm {
    pub prefix: i64,
    pub word: Word,
    pub w2: Word,
    pub w1: Word,
}

/// `t_i β^a φ^b ≈ β^{a'} φ^{b'} u` with u a G_k generator.
fn claim2(k: usize, i: usize, a: usize, b: usize) -> (usize, usize, Letter) {
    // prepend φ^c to β^{a''} φ^{b''} u, cancelling φβ pairs
    let phis_then = |c: usize, (a2, b2, u): (usize, usize, Letter)| {
        let cancel = c.min(a2);
        (a2 - cancel, b2 + c - cancel, u)
    };
    if a == 0 && b == 0 {
        return if i + 1 == k { (0, 1, Letter::Gamma) } else { (0, 0, Letter::T(i)) };
    }
    if a == 0 {
        if i + 1 != k {
            return phis_then(1, claim2(k, i + 1, 0, b - 1));
        }
        if b == 1 {
            return (0, 0, Letter::Psi);
        }
        return phis_then(2, claim2(k, 1, 0, b - 2));
    }
    if i != 1 {
        let (a2, b2, u) = claim2(k, i - 1, a - 1, b);
        return (a2 + 1, b2, u);
    }
    let (a2, b2, u) = if a == 1 { claim2(k, k - 1, 0, b + 1) } else { claim2(k, k - 1, a - 2, b) };
    (a2 + 2, b2, u)
}

/// Border-guard normal form (requires k >= 2).
pub fn border_guard_form(w: &Word) -> BorderGuardForm {
    let k = w.k();
    let w = w.to_b();
    let (mut a, mut b) = (0usize, 0usize);
    let mut good: Vec<Letter> = Vec::new();
    for l in w.letters().iter().rev() {
        match l {
            Letter::Beta => a += 1,
            Letter::Phi if a > 0 => a -= 1,
            Letter::Phi => b += 1,
            Letter::T(i) => {
                let (a2, b2, u) = claim2(k, *i, a, b);
                a = a2;
                b = b2;
                good.insert(0, u);
            }
            _ => unreachable!("B_k image"),
        }
    }
    let prefix = b as i64 - a as i64;
    let word = Word { letters: good, k, alphabet: Alphabet::G };
    let (w2, w1) = w1w2_split(&word);
    BorderGuardForm { prefix, word, w2, w1 }
}

/// Shifts every `t_i` down to `t_{i-1}` (all indices must be >= 2).
fn shift_down(v: &[Letter]) -> Vec<Letter> {
    v.iter()
        .map(|l| match l {
            Letter::T(i) => Letter::T(i - 1),
            other => *other,
        })
        .collect()
}

/// Rewrites `ψ u γ` (u over t_1..t_{k-2}) until every γ precedes every ψ; returns (w2, w1).
pub fn w1w2_split(w: &Word) -> (Word, Word) {
    let k = w.k();
    let mut letters = w.letters().to_vec();
    loop {
        // find a ψ ... γ with only t-letters in between
        let mut hit = None;
        for (pi, l) in letters.iter().enumerate() {
            if *l != Letter::Psi {
                continue;
            }
            let mut j = pi + 1;
            while j < letters.len() && matches!(letters[j], Letter::T(_)) {
                j += 1;
            }
            if j < letters.len() && letters[j] == Letter::Gamma {
                hit = Some((pi, j));
                break;
            }
        }
        let Some((pi, gi)) = hit else { break };
        let u = Word { letters: letters[pi + 1..gi].to_vec(), k: k.saturating_sub(1).max(1), alphabet: Alphabet::M };
        let canon = first_canonical_form(&u);
        let cl = canon.letters().to_vec();
        let replacement: Vec<Letter> = match cl.iter().position(|l| *l == Letter::T(1)) {
            None => shift_down(&cl),
            Some(one) => {
                // canonical form is (t_a ... t_1) v with v over t_2..
                let a = one + 1;
                let mut r: Vec<Letter> = (1..a).rev().map(Letter::T).collect();
                r.push(Letter::Gamma);
                if k >= 3 {
                    r.push(Letter::T(k - 2));
                }
                r.push(Letter::Psi);
                r.extend(shift_down(&cl[one + 1..]));
                r
            }
        };
        letters.splice(pi..=gi, replacement);
    }
    // every γ now precedes every ψ
    let cut = letters.iter().rposition(|l| *l == Letter::Gamma).map_or(0, |g| g + 1);
    let w2 = Word { letters: letters[..cut].to_vec(), k, alphabet: Alphabet::G };
    let w1 = Word { letters: letters[cut..].to_vec(), k, alphabet: Alphabet::G };
    (w2, w1)
}

/// Oracle: action of a B_k (or G_k, M_k) word on affine labelings L with L(j+k) = L(j)+k,
/// starting from the identity. Returns L(1..=k).
pub fn affine_action(w: &Word) -> Vec<i64> {
    let k = w.k() as i64;
    let w = w.to_b();
    // L stored on 1..=k, extended periodically
    let mut lab: Vec<i64> = (1..=k).collect();
    let get = |lab: &Vec<i64>, j: i64| -> i64 {
        let r = (j - 1).rem_euclid(k);
        let q = (j - 1).div_euclid(k);
        lab[r as usize] + q * k
    };
    for l in w.letters().iter().rev() {
        let next: Vec<i64> = (1..=k)
            .map(|j| match l {
                Letter::Phi => get(&lab, j + 1),
                Letter::Beta => get(&lab, j - 1),
                Letter::T(i) => {
                    let i = *i as i64;
                    let s = if j == i {
                        i + 1
                    } else if j == i + 1 {
                        i
                    } else {
                        j
                    };
                    get(&lab, s)
                }
                _ => unreachable!("B_k image"),
            })
            .collect();
        lab = next;
    }
    lab
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mw(s: &str, k: usize) -> Word {
        Word::parse(s, k, Alphabet::M).unwrap()
    }
    fn bw(s: &str, k: usize) -> Word {
        Word::parse(s, k, Alphabet::B).unwrap()
    }

    #[test]
    fn permutations() {
        assert_eq!(permutation_of(&mw("", 3)), Permutation::identity(3));
        assert_eq!(permutation_of(&mw("t1", 3)).images(), &[2, 1, 3]);
        assert_eq!(permutation_of(&mw("t1 t2 t1", 3)).images(), &[3, 2, 1]);
    }

    #[test]
    fn first_canonical() {
        assert!(first_canonical_form(&mw("t1 t1", 3)).is_empty());
        assert_eq!(first_canonical_form(&mw("t1 t2 t1", 3)).to_string(), "t2 t1 t2");
    }

    #[test]
    fn second_canonical_small() {
        let s = second_canonical_form(&mw("t2", 4), &[2, 2]).unwrap();
        assert_eq!(s.v.to_string(), "t2");
        assert!(s.blocks.iter().all(|b| b.is_empty()));
        let s = second_canonical_form(&mw("t1", 4), &[2, 2]).unwrap();
        assert!(s.v.is_empty());
        assert_eq!(s.blocks[0].to_string(), "t1");
        assert!(second_canonical_form(&mw("t1", 4), &[2, 1]).is_err());
    }

    #[test]
    fn b_normal_forms() {
        assert!(bword_normal_form(&bw("b f", 3)).u.is_empty());
        assert_eq!(bword_normal_form(&bw("b f", 3)).prefix, 0);
        assert_eq!(bword_normal_form(&bw("t1 f", 3)).u.to_string(), "f t2");
        let n = bword_normal_form(&bw("f f f", 3));
        assert_eq!((n.prefix, n.u.len()), (3, 0));
    }

    #[test]
    fn border_guard_base_case() {
        let g = border_guard_form(&bw("t2", 3));
        assert_eq!(g.prefix, 1);
        assert_eq!(g.word.to_string(), "g");
        let g = border_guard_form(&bw("t1", 3));
        assert_eq!((g.prefix, g.word.to_string()), (0, "t1".to_string()));
    }

    #[test]
    fn rewrites_match_affine_oracle() {
        let k = 3;
        for s in ["t1 b", "t2 f t1 b b", "f t2 t1 b t2 f", "b b t1 t2 f"] {
            let w = bw(s, k);
            let n = bword_normal_form(&w);
            assert_eq!(affine_action(&w), affine_action(&n.to_word()), "{s}");
            let g = border_guard_form(&w);
            let mut letters = prefix_letters(g.prefix);
            letters.extend(g.word.to_b().letters().iter().copied());
            let back = Word::new(letters, k, Alphabet::B).unwrap();
            assert_eq!(affine_action(&w), affine_action(&back), "{s}");
        }
    }
}
