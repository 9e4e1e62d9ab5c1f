//! Compression-based complexity of relation paths.
//!
//! A path is encoded as its relation labels joined by `|` and compressed with
//! a greedy LZ77 coder. The compressor runs over the graph's relation corpus
//! followed by the path, so a path made of frequent relations is mostly
//! covered by back-references into the corpus. The complexity is the extra
//! cost the path adds, divided by its raw length and clamped to `[0, 1]`.
//!
//! Cost model: a literal costs 1 unit, a match costs 3 units.

use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;
use crate::traversal::RelationPath;

pub const DEFAULT_WINDOW: usize = 32 * 1024;
pub const DEFAULT_MIN_MATCH: usize = 3;
/// The relation corpus keeps only its final `CORPUS_CAP` bytes.
pub const CORPUS_CAP: usize = 32 * 1024;
pub const LITERAL_COST: u64 = 1;
pub const MATCH_COST: u64 = 3;

pub const DELIMITER: u8 = b'|';

/// Relation labels of a path joined by `|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EncodedPath(String);

impl EncodedPath {
    /// Joins `labels` with `|`. Labels must be non-empty and free of `|`.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let mut out = String::new();
        for (i, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if label.as_bytes().contains(&DELIMITER) {
                return Err(Error::ReservedDelimiter(label.to_owned()));
            }
            if i > 0 {
                out.push(DELIMITER as char);
            }
            out.push_str(label);
        }
        Ok(EncodedPath(out))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.0.is_empty() {
            0
        } else {
            self.0.split(DELIMITER as char).count()
        }
    }
}

pub fn encode_path(path: &RelationPath, graph: &KnowledgeGraph) -> Result<EncodedPath> {
    let labels: Vec<&str> = path
        .relations
        .iter()
        .map(|&r| graph.relation_label(r))
        .collect();
    EncodedPath::from_labels(&labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LzToken {
    Literal(u8),
    /// Copy `length` bytes starting `offset` bytes back. May overlap itself.
    Match { offset: usize, length: usize },
}

impl LzToken {
    pub fn cost(self) -> u64 {
        match self {
            LzToken::Literal(_) => LITERAL_COST,
            LzToken::Match { .. } => MATCH_COST,
        }
    }

    /// Number of bytes this token expands to.
    pub fn span(self) -> usize {
        match self {
            LzToken::Literal(_) => 1,
            LzToken::Match { length, .. } => length,
        }
    }
}

pub fn token_cost(tokens: &[LzToken]) -> u64 {
    tokens.iter().map(|t| t.cost()).sum()
}

/// Greedy LZ77 coder.
///
/// At each position the longest match inside the window is taken (ties go to
/// the smallest offset); shorter than `min_match` emits a literal instead.
/// Match length is unbounded and matches may run into the bytes they produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz77 {
    window: usize,
    min_match: usize,
}

impl Default for Lz77 {
    fn default() -> Self {
        Lz77 {
            window: DEFAULT_WINDOW,
            min_match: DEFAULT_MIN_MATCH,
        }
    }
}

impl Lz77 {
    /// # Panics
    ///
    /// If `window` or `min_match` is zero.
    pub fn new(window: usize, min_match: usize) -> Self {
        assert!(window >= 1, "LZ77 window must be at least 1");
        assert!(min_match >= 1, "LZ77 minimum match must be at least 1");
        Lz77 { window, min_match }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn min_match(&self) -> usize {
        self.min_match
    }

    fn hash_len(&self) -> usize {
        self.min_match.min(3)
    }

    pub fn compress(&self, input: &[u8]) -> Vec<LzToken> {
        let mut index = ChainIndex::new(self.hash_len());
        let mut tokens = Vec::new();
        self.tokenize(input, 0, &mut index, |t| tokens.push(t));
        tokens
    }

    /// Tokenizes `buf[start..]`, with `buf[..start]` as history.
    ///
    /// `index` must already hold every history position it can hold. Positions
    /// at or after `start` are added as the coder passes them.
    fn tokenize(
        &self,
        buf: &[u8],
        start: usize,
        index: &mut ChainIndex,
        mut emit: impl FnMut(LzToken),
    ) {
        let mut p = start;
        while p < buf.len() {
            let (length, offset) = self.longest_match(buf, p, index);
            let token = if length >= self.min_match {
                LzToken::Match { offset, length }
            } else {
                LzToken::Literal(buf[p])
            };
            p += token.span();
            index.extend(buf, p);
            emit(token);
        }
    }

    /// Longest match at `p` as `(length, offset)`.
    ///
    /// Positions the index has not reached yet are scanned directly; they are
    /// all closer than anything in the index, so scanning them first and only
    /// accepting strictly longer matches afterwards keeps the smallest offset
    /// on ties.
    fn longest_match(&self, buf: &[u8], p: usize, index: &ChainIndex) -> (usize, usize) {
        let limit = buf.len() - p;
        let lowest = p.saturating_sub(self.window);
        let mut best = (0, 0);
        for q in (lowest.max(index.covered)..p).rev() {
            let l = common_prefix(buf, q, p);
            if l > best.0 {
                best = (l, p - q);
                if l == limit {
                    return best;
                }
            }
        }
        if p + index.hash_len > buf.len() {
            return best;
        }
        let mut q = index.head(&buf[p..p + index.hash_len]);
        while let Some(pos) = q {
            // The estimator resumes behind the end of its prebuilt index.
            if pos >= p {
                q = index.prev(pos);
                continue;
            }
            if pos < lowest {
                break;
            }
            let l = common_prefix(buf, pos, p);
            if l > best.0 {
                best = (l, p - pos);
                if l == limit {
                    break;
                }
            }
            q = index.prev(pos);
        }
        best
    }
}

#[inline]
fn common_prefix(buf: &[u8], q: usize, p: usize) -> usize {
    buf[p..]
        .iter()
        .zip(&buf[q..])
        .take_while(|(a, b)| a == b)
        .count()
}

const HASH_BITS: u32 = 16;
const NIL: u32 = u32::MAX;

/// Hash chains over the positions `0..covered`, newest first.
#[derive(Debug, Clone)]
struct ChainIndex {
    hash_len: usize,
    head: Vec<u32>,
    prev: Vec<u32>,
    covered: usize,
}

impl ChainIndex {
    fn new(hash_len: usize) -> Self {
        ChainIndex {
            hash_len,
            head: vec![NIL; 1 << HASH_BITS],
            prev: Vec::new(),
            covered: 0,
        }
    }

    fn bucket(key: &[u8]) -> usize {
        let mut v: u32 = 0;
        for &b in key {
            v = (v << 8) | u32::from(b);
        }
        (v.wrapping_mul(0x9E37_79B1) >> (32 - HASH_BITS)) as usize
    }

    /// Indexes positions up to `upto` whose key lies fully inside `buf`.
    fn extend(&mut self, buf: &[u8], upto: usize) {
        let upto = upto.min((buf.len() + 1).saturating_sub(self.hash_len));
        while self.covered < upto {
            let q = self.covered;
            let b = Self::bucket(&buf[q..q + self.hash_len]);
            self.prev.push(self.head[b]);
            self.head[b] = q as u32;
            self.covered += 1;
        }
    }

    fn head(&self, key: &[u8]) -> Option<usize> {
        let h = self.head[Self::bucket(key)];
        (h != NIL).then_some(h as usize)
    }

    fn prev(&self, pos: usize) -> Option<usize> {
        let h = self.prev[pos];
        (h != NIL).then_some(h as usize)
    }
}

/// Greedy LZ77 compression of `input`.
pub fn lz77_compress(input: &[u8], window: usize, min_match: usize) -> Vec<LzToken> {
    Lz77::new(window, min_match).compress(input)
}

/// Expands a token stream. Fails if a match reaches before the output start.
pub fn lz77_decompress(tokens: &[LzToken]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(tokens.iter().map(|t| t.span()).sum());
    for &t in tokens {
        match t {
            LzToken::Literal(b) => out.push(b),
            LzToken::Match { offset, length } => {
                if offset == 0 || offset > out.len() {
                    return Err(Error::CorruptStream {
                        position: out.len(),
                        offset,
                    });
                }
                let from = out.len() - offset;
                for i in 0..length {
                    out.push(out[from + i]);
                }
            }
        }
    }
    Ok(out)
}

/// Relation labels of every stored triple, in storage order, joined by `|`
/// and cut to the final [`CORPUS_CAP`] bytes.
pub fn build_relation_corpus(graph: &KnowledgeGraph) -> Vec<u8> {
    // Walk backwards and stop once the cap is covered.
    let mut parts: Vec<&[u8]> = Vec::new();
    let mut total = 0usize;
    for t in graph.triples().rev() {
        let label = graph.relation_label(t.relation).as_bytes();
        total += label.len() + usize::from(!parts.is_empty());
        parts.push(label);
        if total >= CORPUS_CAP {
            break;
        }
    }
    let mut corpus = Vec::with_capacity(total);
    for (i, label) in parts.iter().rev().enumerate() {
        if i > 0 {
            corpus.push(DELIMITER);
        }
        corpus.extend_from_slice(label);
    }
    let cut = corpus.len().saturating_sub(CORPUS_CAP);
    corpus.drain(..cut);
    corpus
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityEstimate {
    /// Normalized complexity in `[0, 1]`.
    pub k: f64,
    pub conditional_cost: u64,
    pub raw_length: usize,
}

impl ComplexityEstimate {
    fn from_cost(conditional_cost: u64, raw_length: usize) -> Self {
        let k = if raw_length == 0 {
            0.0
        } else {
            (conditional_cost as f64 / raw_length as f64).clamp(0.0, 1.0)
        };
        ComplexityEstimate {
            k,
            conditional_cost,
            raw_length,
        }
    }

    /// Estimate used for targets with no path at all.
    pub fn disconnected() -> Self {
        ComplexityEstimate {
            k: 1.0,
            conditional_cost: 0,
            raw_length: 0,
        }
    }
}

/// Estimates path complexity against one fixed corpus.
///
/// The corpus is tokenized once. Greedy tokens that end strictly before the
/// corpus end, and literals whose lookahead stays inside it, come out the same
/// whatever is appended, so each estimate only re-codes the corpus tail plus
/// the path.
#[derive(Debug, Clone)]
pub struct ComplexityEstimator {
    coder: Lz77,
    corpus: Vec<u8>,
    index: ChainIndex,
    /// Start of the first corpus token that appending could change.
    resume_at: usize,
    /// Cost of the tokens before `resume_at`.
    stable_cost: u64,
    corpus_cost: u64,
}

impl ComplexityEstimator {
    pub fn new(corpus: Vec<u8>) -> Self {
        Self::with_coder(corpus, Lz77::default())
    }

    pub fn for_graph(graph: &KnowledgeGraph) -> Self {
        Self::new(build_relation_corpus(graph))
    }

    pub fn with_coder(corpus: Vec<u8>, coder: Lz77) -> Self {
        let n = corpus.len();
        let mut index = ChainIndex::new(coder.hash_len());
        let mut pos = 0;
        let mut resume_at = None;
        let mut stable_cost = 0;
        let mut corpus_cost = 0;
        coder.tokenize(&corpus, 0, &mut index, |t| {
            let unstable = match t {
                LzToken::Literal(_) => pos + coder.min_match > n,
                LzToken::Match { length, .. } => pos + length == n,
            };
            if unstable && resume_at.is_none() {
                resume_at = Some(pos);
            }
            if resume_at.is_none() {
                stable_cost += t.cost();
            }
            corpus_cost += t.cost();
            pos += t.span();
        });
        ComplexityEstimator {
            coder,
            corpus,
            index,
            resume_at: resume_at.unwrap_or(n),
            stable_cost,
            corpus_cost,
        }
    }

    pub fn corpus(&self) -> &[u8] {
        &self.corpus
    }

    /// Cost of compressing the corpus on its own.
    pub fn corpus_cost(&self) -> u64 {
        self.corpus_cost
    }

    pub fn estimate(&self, path: &EncodedPath) -> ComplexityEstimate {
        if path.is_empty() {
            return ComplexityEstimate::from_cost(0, 0);
        }
        let mut buf = Vec::with_capacity(self.corpus.len() + 1 + path.len());
        buf.extend_from_slice(&self.corpus);
        if !self.corpus.is_empty() {
            buf.push(DELIMITER);
        }
        buf.extend_from_slice(path.as_bytes());

        // The shared index stops at the last key that fits in the corpus;
        // later keys straddle the appended bytes and are scanned directly.
        // Positions before `resume_at` are never searched from again, so the
        // coder only ever reads this index.
        let mut cost = self.stable_cost;
        let mut p = self.resume_at;
        while p < buf.len() {
            let (length, _) = self.coder.longest_match(&buf, p, &self.index);
            let token_cost = if length >= self.coder.min_match {
                p += length;
                MATCH_COST
            } else {
                p += 1;
                LITERAL_COST
            };
            cost += token_cost;
        }
        let conditional = cost.saturating_sub(self.corpus_cost);
        ComplexityEstimate::from_cost(conditional, path.len())
    }
}

/// One-shot estimate; see [`ComplexityEstimator`] for repeated use.
pub fn kolmogorov_estimate(path: &EncodedPath, corpus: &[u8]) -> ComplexityEstimate {
    ComplexityEstimator::new(corpus.to_vec()).estimate(path)
}
