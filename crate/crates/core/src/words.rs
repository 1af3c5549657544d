//! Words over `Z_n`, the `↓` operator, the alternation-free sequences `X`
//! and `X̂`, and the layered graphs their words encode paths in.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::graph::{ParametricGraph, Path};

/// A word over `Z_n`. Binary words keep the modulus `n` of the graph they
/// walk in; only their symbols are restricted to `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub n: usize,
    pub symbols: Vec<usize>,
}

impl Word {
    pub fn new(n: usize, symbols: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidParameter(format!("symbol {s} not below {n}")));
        }
        Ok(Self { n, symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `|σ[i:j]|_1`.
    pub fn sum(&self, i: usize, j: usize) -> Result<usize> {
        word_sum(self, i, j)
    }

    /// Prefix sums `|σ[0:k]|_1` for `k = 0..=len`.
    pub fn prefix_sums(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &s in &self.symbols {
            acc = (acc + s) % self.n;
            out.push(acc);
        }
        out
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

pub fn word_sum(w: &Word, i: usize, j: usize) -> Result<usize> {
    if i > j || j > w.len() {
        return Err(Error::InvalidParameter(format!(
            "window [{i}, {j}) outside a word of length {}",
            w.len()
        )));
    }
    Ok(w.symbols[i..j].iter().sum::<usize>() % w.n)
}

/// `σ ↓ j`.
pub fn insert_after(w: &Word, j: usize) -> Result<Word> {
    if j >= w.n {
        return Err(Error::InvalidParameter(format!(
            "symbol {j} not below {}",
            w.n
        )));
    }
    let symbols = w.symbols.iter().flat_map(|&s| [s, j]).collect();
    Ok(Word { n: w.n, symbols })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSequence {
    pub n: usize,
    pub length: usize,
    #[serde(default)]
    pub binary: bool,
    pub words: Vec<Vec<usize>>,
}

impl WordSequence {
    pub fn new(n: usize, binary: bool, words: Vec<Word>) -> Result<Self> {
        let length = words.first().map_or(0, Word::len);
        let limit = if binary { 2.min(n) } else { n };
        for w in &words {
            if w.n != n || w.len() != length {
                return Err(Error::InvalidParameter(
                    "words differ in alphabet or length".into(),
                ));
            }
            if w.symbols.iter().any(|&s| s >= limit) {
                return Err(Error::InvalidParameter(
                    "symbol outside the alphabet".into(),
                ));
            }
        }
        Ok(Self {
            n,
            length,
            binary,
            words: words.into_iter().map(|w| w.symbols).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> Word {
        Word {
            n: self.n,
            symbols: self.words[i].clone(),
        }
    }

    /// Re-checks alphabet and uniform length, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        let words = (0..self.len()).map(|i| self.word(i)).collect();
        let again = WordSequence::new(self.n, self.binary, words)?;
        if again.length != self.length && !self.is_empty() {
            return Err(Error::InvalidParameter(
                "declared length does not match".into(),
            ));
        }
        Ok(())
    }

    pub fn insert_after(&self, j: usize) -> Result<WordSequence> {
        let words = (0..self.len())
            .map(|i| insert_after(&self.word(i), j))
            .collect::<Result<Vec<_>>>()?;
        let mut out = WordSequence::new(self.n, self.binary, words)?;
        out.length = 2 * self.length;
        Ok(out)
    }
}

fn digits(mut i: usize, n: usize, ell: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(ell);
    for _ in 0..ell {
        d.push(i % n);
        i /= n;
    }
    d
}

/// `X[i] = (b_0) ↓ b_1 ↓ ... ↓ b_{ℓ-1}` with `b` the base-`n` digits of `i`.
pub fn x_word(n: usize, ell: usize, i: usize) -> Word {
    let d = digits(i, n, ell);
    let mut symbols = vec![d[0]];
    for &b in &d[1..] {
        symbols = symbols.iter().flat_map(|&s| [s, b]).collect();
    }
    Word { n, symbols }
}

fn check_gen(n: usize, ell: usize) -> Result<()> {
    if n < 2 || ell < 1 {
        return Err(Error::InvalidParameter("need n >= 2 and ell >= 1".into()));
    }
    n.checked_pow(ell as u32)
        .filter(|&c| c <= 1 << 24)
        .map(|_| ())
        .ok_or_else(|| Error::TooLarge(format!("{n}^{ell} words")))
}

pub fn gen_x(n: usize, ell: usize) -> Result<WordSequence> {
    check_gen(n, ell)?;
    let words = (0..n.pow(ell as u32)).map(|i| x_word(n, ell, i)).collect();
    WordSequence::new(n, false, words)
}

/// `î = 1^i 0^{n-1-i}`.
pub fn hat(i: usize, n: usize) -> Vec<usize> {
    (0..n - 1).map(|k| usize::from(k < i)).collect()
}

pub fn gen_xhat(n: usize, ell: usize) -> Result<WordSequence> {
    check_gen(n, ell)?;
    let words = (0..n.pow(ell as u32))
        .map(|i| Word {
            n,
            symbols: x_word(n, ell, i)
                .symbols
                .iter()
                .flat_map(|&s| hat(s, n))
                .collect(),
        })
        .collect();
    WordSequence::new(n, true, words)
}

/// `σ_a[u:v] = σ_c[u:v] != σ_b[u:v]` with matching prefix sums at `u` and
/// (unless `v = m`) at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordAlternation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub u: usize,
    pub v: usize,
}

/// Checks the definition directly for one candidate.
pub fn is_alternation(s: &WordSequence, alt: &WordAlternation) -> bool {
    let WordAlternation { a, b, c, u, v } = *alt;
    let m = s.length;
    if !(a < b && b < c && c < s.len() && u < v && v <= m) {
        return false;
    }
    let ps: Vec<Vec<usize>> = [a, b, c].iter().map(|&i| s.word(i).prefix_sums()).collect();
    let same_at = |k: usize| ps[0][k] == ps[1][k] && ps[1][k] == ps[2][k];
    let (wa, wb, wc) = (&s.words[a][u..v], &s.words[b][u..v], &s.words[c][u..v]);
    same_at(u) && (v == m || same_at(v)) && wa == wc && wa != wb
}

/// First alternation in `(u, v, c)` order, or `None`.
///
/// For a fixed window, words are grouped by their prefix sums at `u` and
/// `v`; inside a group an alternation is a subword that reappears after a
/// different one, so one pass with a "closed" set per group suffices.
type WindowGroup<'a> = (&'a [usize], usize, HashMap<&'a [usize], usize>);

pub fn find_alternation(s: &WordSequence) -> Option<WordAlternation> {
    let m = s.length;
    let ps: Vec<Vec<usize>> = (0..s.len()).map(|i| s.word(i).prefix_sums()).collect();
    for u in 0..m {
        for v in u + 1..=m {
            // group key -> (current window and its last index, window -> last index)
            let mut groups: HashMap<(usize, usize), WindowGroup> = HashMap::new();
            for (idx, w) in s.words.iter().enumerate() {
                let key = (ps[idx][u], if v == m { 0 } else { ps[idx][v] });
                let window = &w[u..v];
                match groups.get_mut(&key) {
                    None => {
                        let mut seen = HashMap::new();
                        seen.insert(window, idx);
                        groups.insert(key, (window, idx, seen));
                    }
                    Some((cur, cur_idx, seen)) => {
                        if *cur != window {
                            if let Some(&a) = seen.get(window) {
                                return Some(WordAlternation {
                                    a,
                                    b: *cur_idx,
                                    c: idx,
                                    u,
                                    v,
                                });
                            }
                        }
                        seen.insert(window, idx);
                        *cur = window;
                        *cur_idx = idx;
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    NonPlanar,
    Planar,
}

/// `G^npl[n, m]` or `G^pl[n, m]`: `s = 0`, `(i, j) -> 1 + j n + i`,
/// `t = n m + 1`, all weights zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordGraph {
    pub kind: GraphKind,
    pub n: usize,
    pub m: usize,
    pub graph: ParametricGraph,
}

impl WordGraph {
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        1 + j * self.n + i
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.n * self.m + 1
    }
}

fn gen_word_graph(n: usize, m: usize, kind: GraphKind) -> Result<WordGraph> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameter("need n >= 2 and m >= 1".into()));
    }
    let t = n * m + 1;
    let id = |i: usize, j: usize| 1 + j * n + i;
    let mut g = ParametricGraph::new(t + 1, 0, t)?;
    for i in 0..n {
        g.add_edge(0, id(i, 0), AffineForm::zero())?;
    }
    for j in 0..m - 1 {
        for i in 0..n {
            match kind {
                GraphKind::NonPlanar => {
                    for k in 0..n {
                        g.add_edge(id(i, j), id(k, j + 1), AffineForm::zero())?;
                    }
                }
                GraphKind::Planar => {
                    for b in 0..2 {
                        g.add_edge(id(i, j), id((i + b) % n, j + 1), AffineForm::zero())?;
                    }
                }
            }
        }
    }
    for i in 0..n {
        g.add_edge(id(i, m - 1), t, AffineForm::zero())?;
    }
    g.layers = Some(
        std::iter::once(0)
            .chain((0..m).flat_map(|j| std::iter::repeat_n(j + 1, n)))
            .chain(std::iter::once(m + 1))
            .collect(),
    );
    Ok(WordGraph {
        kind,
        n,
        m,
        graph: g,
    })
}

pub fn gen_gnpl(n: usize, m: usize) -> Result<WordGraph> {
    gen_word_graph(n, m, GraphKind::NonPlanar)
}

pub fn gen_gpl(n: usize, m: usize) -> Result<WordGraph> {
    gen_word_graph(n, m, GraphKind::Planar)
}

/// `s, (i_0, 0), ..., (i_{m-1}, m-1), t` with `i_0 = σ_0` and
/// `i_{j+1} = i_j + σ_{j+1} mod n`.
pub fn word_to_path(w: &Word, g: &WordGraph) -> Result<Path> {
    if w.len() != g.m {
        return Err(Error::InvalidPath(format!(
            "word of length {} in a graph with {} layers",
            w.len(),
            g.m
        )));
    }
    let limit = match g.kind {
        GraphKind::NonPlanar => g.n,
        GraphKind::Planar => 2,
    };
    if let Some(s) = w.symbols.iter().find(|&&s| s >= limit) {
        return Err(Error::InvalidPath(format!(
            "symbol {s} has no edge in this graph"
        )));
    }
    let mut vertices = vec![g.source()];
    let mut i = 0;
    for (j, &s) in w.symbols.iter().enumerate() {
        i = if j == 0 { s % g.n } else { (i + s) % g.n };
        vertices.push(g.vertex(i, j));
    }
    vertices.push(g.sink());
    g.graph.path_from_vertices(&vertices)
}

/// Maps every word of `s` into the matching graph (`G^pl` for binary
/// sequences, `G^npl` otherwise).
pub fn sequence_to_paths(s: &WordSequence) -> Result<(WordGraph, Vec<Path>)> {
    let g = if s.binary {
        gen_gpl(s.n, s.length)?
    } else {
        gen_gnpl(s.n, s.length)?
    };
    let paths = (0..s.len())
        .map(|i| word_to_path(&s.word(i), &g))
        .collect::<Result<Vec<_>>>()?;
    Ok((g, paths))
}

/// No equal neighbours and no pair of symbols alternating `s + 2` times.
pub fn is_davenport_schinzel<T: Eq + std::hash::Hash + Clone>(seq: &[T], s: usize) -> bool {
    if seq.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let mut index: HashMap<&T, usize> = HashMap::new();
    for x in seq {
        let k = index.len();
        index.entry(x).or_insert(k);
    }
    let ids: Vec<usize> = seq.iter().map(|x| index[x]).collect();
    let k = index.len();
    for x in 0..k {
        for y in x + 1..k {
            // runs of the subsequence restricted to {x, y}
            let mut runs = 0;
            let mut last = usize::MAX;
            for &c in &ids {
                if (c == x || c == y) && c != last {
                    runs += 1;
                    last = c;
                }
            }
            if runs >= s + 2 {
                return false;
            }
        }
    }
    true
}

/// `A(m, x)` clamped to `cap`.
pub fn ackermann_capped(m: u64, x: u64, cap: u64) -> u64 {
    let r = match m {
        0 => x.saturating_add(1),
        1 => x.saturating_add(2),
        2 => x.saturating_mul(2).saturating_add(3),
        3 => {
            if x + 3 >= 64 {
                u64::MAX
            } else {
                (1u64 << (x + 3)) - 3
            }
        }
        _ => {
            if x == 0 {
                ackermann_capped(m - 1, 1, cap)
            } else {
                let inner = ackermann_capped(m, x - 1, cap);
                if inner >= cap {
                    cap
                } else {
                    ackermann_capped(m - 1, inner, cap)
                }
            }
        }
    };
    r.min(cap)
}

pub fn ackermann(m: u64, x: u64) -> Option<u64> {
    let v = ackermann_capped(m, x, u64::MAX);
    (v < u64::MAX).then_some(v)
}

/// Smallest `r` with `A(r, r) >= n`.
pub fn inverse_ackermann(n: u64) -> u64 {
    (0..).find(|&r| ackermann_capped(r, r, n) >= n).unwrap()
}
