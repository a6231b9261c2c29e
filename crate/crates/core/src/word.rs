//! Binary words with compressed zero runs, prefix codes and the `code`
//! encodings.
//!
//! A [`Word`] is kept in a normal form: zero runs of at least
//! [`ZERO_RUN_MIN`] bits are stored as a counter, everything else as
//! literal bits. Because the form is canonical, structural equality is
//! equality of the expanded strings.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Zero runs at least this long are stored as a counter.
pub const ZERO_RUN_MIN: u128 = 64;

/// Zero runs at least this long are printed in the compact `0*<n>` form.
pub const DISPLAY_RUN_MIN: u128 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word token {0:?}")]
    Parse(String),
    #[error("symbol {0:?} is not in {{0,1,#}}")]
    Symbol(char),
    #[error("tuple encoding needs at least one component")]
    EmptyTuple,
    #[error("not a right ideal: {member} is a member but its extension {extension} is not")]
    NotRightIdeal { member: Word, extension: Word },
    #[error("not a prefix code: {0} is a prefix of {1}")]
    NotPrefixCode(Word, Word),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    Literal(Vec<bool>),
    ZeroRun(u128),
}

/// An immutable binary word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    segs: Vec<Segment>,
    len: u128,
}

/// Accumulates bits and runs into a normalized [`Word`].
#[derive(Clone, Default)]
pub struct WordBuilder {
    segs: Vec<Segment>,
    lit: Vec<bool>,
    zeros: u128,
    len: u128,
}

impl WordBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn grow(&mut self, n: u128) {
        self.len = self.len.checked_add(n).expect("word length overflows u128");
    }

    fn flush_zeros(&mut self) {
        if self.zeros >= ZERO_RUN_MIN {
            if !self.lit.is_empty() {
                self.segs.push(Segment::Literal(std::mem::take(&mut self.lit)));
            }
            self.segs.push(Segment::ZeroRun(self.zeros));
        } else {
            self.lit.extend(std::iter::repeat_n(false, self.zeros as usize));
        }
        self.zeros = 0;
    }

    pub fn push(&mut self, bit: bool) {
        if bit {
            self.flush_zeros();
            self.lit.push(true);
        } else {
            self.zeros += 1;
        }
        self.grow(1);
    }

    pub fn push_zeros(&mut self, n: u128) {
        self.grow(n);
        self.zeros += n;
    }

    pub fn push_run(&mut self, bit: bool, n: u128) {
        if bit {
            if n == 0 {
                return;
            }
            self.flush_zeros();
            self.grow(n);
            let n = usize::try_from(n).expect("run of ones too long to store literally");
            self.lit.extend(std::iter::repeat_n(true, n));
        } else {
            self.push_zeros(n);
        }
    }

    pub fn push_bits(&mut self, bits: &[bool]) {
        for &b in bits {
            self.push(b);
        }
    }

    pub fn push_word(&mut self, w: &Word) {
        for (b, n) in w.runs() {
            self.push_run(b, n);
        }
    }

    pub fn finish(mut self) -> Word {
        self.flush_zeros();
        if !self.lit.is_empty() {
            self.segs.push(Segment::Literal(self.lit));
        }
        Word { segs: self.segs, len: self.len }
    }
}

/// Letters of the three-symbol alphabet `{0,1,#}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Zero,
    One,
    Hash,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn zeros(n: u128) -> Word {
        let mut b = WordBuilder::new();
        b.push_zeros(n);
        b.finish()
    }

    pub fn from_bits(bits: &[bool]) -> Word {
        let mut b = WordBuilder::new();
        b.push_bits(bits);
        b.finish()
    }

    /// Literal constructor for bit strings known to be valid; panics otherwise.
    pub fn lit(s: &str) -> Word {
        s.parse().unwrap_or_else(|e| panic!("bad word literal {s:?}: {e}"))
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    /// Maximal runs `(bit, length)` from left to right.
    pub fn runs(&self) -> Vec<(bool, u128)> {
        let mut out: Vec<(bool, u128)> = Vec::new();
        let mut push = |b: bool, n: u128| {
            if n == 0 {
                return;
            }
            match out.last_mut() {
                Some((lb, ln)) if *lb == b => *ln += n,
                _ => out.push((b, n)),
            }
        };
        for s in &self.segs {
            match s {
                Segment::ZeroRun(n) => push(false, *n),
                Segment::Literal(bits) => {
                    for &b in bits {
                        push(b, 1);
                    }
                }
            }
        }
        out
    }

    pub fn run_index(&self) -> RunIndex {
        RunIndex::new(self)
    }

    pub fn bit_at(&self, i: u128) -> Option<bool> {
        if i >= self.len {
            return None;
        }
        let mut base = 0u128;
        for s in &self.segs {
            match s {
                Segment::ZeroRun(n) => {
                    if i < base + n {
                        return Some(false);
                    }
                    base += n;
                }
                Segment::Literal(bits) => {
                    let n = bits.len() as u128;
                    if i < base + n {
                        return Some(bits[(i - base) as usize]);
                    }
                    base += n;
                }
            }
        }
        None
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let n = usize::try_from(self.len).expect("word too long to expand");
        let mut v = Vec::with_capacity(n);
        for (b, k) in self.runs() {
            v.extend(std::iter::repeat_n(b, k as usize));
        }
        v
    }

    pub fn ones_count(&self) -> u128 {
        self.runs().iter().filter(|r| r.0).map(|r| r.1).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut b = WordBuilder::new();
        b.push_word(self);
        b.push_word(other);
        b.finish()
    }

    pub fn concat_all(parts: &[&Word]) -> Word {
        let mut b = WordBuilder::new();
        for p in parts {
            b.push_word(p);
        }
        b.finish()
    }

    /// Bits in positions `start..end` (clamped to the word).
    pub fn slice(&self, start: u128, end: u128) -> Word {
        let end = end.min(self.len);
        let mut b = WordBuilder::new();
        if start >= end {
            return b.finish();
        }
        let mut pos = 0u128;
        for (bit, n) in self.runs() {
            let lo = pos.max(start);
            let hi = (pos + n).min(end);
            if lo < hi {
                b.push_run(bit, hi - lo);
            }
            pos += n;
            if pos >= end {
                break;
            }
        }
        b.finish()
    }

    pub fn prefix(&self, n: u128) -> Word {
        self.slice(0, n)
    }

    pub fn drop_prefix(&self, n: u128) -> Word {
        self.slice(n, self.len)
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        p.len <= self.len && &self.prefix(p.len) == p
    }

    pub fn strip_prefix(&self, p: &Word) -> Option<Word> {
        if self.starts_with(p) {
            Some(self.drop_prefix(p.len))
        } else {
            None
        }
    }

    /// Number of leading zeros.
    pub fn leading_zeros(&self) -> u128 {
        match self.runs().first() {
            Some((false, n)) => *n,
            _ => 0,
        }
    }

    /// Compact text form, see the module docs.
    pub fn to_compact(&self) -> String {
        self.to_string()
    }

    /// Plain bit string; only sensible for short words.
    pub fn bit_string(&self) -> String {
        self.to_bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Length of the longest common suffix.
pub fn common_suffix_len(a: &Word, b: &Word) -> u128 {
    let ra = a.runs();
    let rb = b.runs();
    let mut ia = ra.iter().rev().copied();
    let mut ib = rb.iter().rev().copied();
    let mut total = 0u128;
    let (mut ca, mut cb) = (ia.next(), ib.next());
    while let (Some((ba, na)), Some((bb, nb))) = (ca, cb) {
        if ba != bb {
            break;
        }
        let m = na.min(nb);
        total += m;
        if na != nb {
            break;
        }
        ca = ia.next();
        cb = ib.next();
    }
    total
}

/// Position lookup over the maximal runs of a word.
#[derive(Clone, Debug)]
pub struct RunIndex {
    starts: Vec<u128>,
    runs: Vec<(bool, u128)>,
    len: u128,
}

impl RunIndex {
    pub fn new(w: &Word) -> RunIndex {
        let runs = w.runs();
        let mut starts = Vec::with_capacity(runs.len());
        let mut p = 0u128;
        for r in &runs {
            starts.push(p);
            p += r.1;
        }
        RunIndex { starts, runs, len: w.len() }
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The bit at `i` together with how many equal bits follow from `i` on.
    pub fn run_at(&self, i: u128) -> Option<(bool, u128)> {
        if i >= self.len {
            return None;
        }
        let k = self.starts.partition_point(|&s| s <= i) - 1;
        let (b, n) = self.runs[k];
        Some((b, self.starts[k] + n - i))
    }

    pub fn bit_at(&self, i: u128) -> Option<bool> {
        self.run_at(i).map(|r| r.0)
    }
}

impl Ord for Word {
    /// Shortlex order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len.cmp(&other.len) {
            Ordering::Equal => {}
            o => return o,
        }
        let ra = self.runs();
        let rb = other.runs();
        let (mut i, mut j) = (0, 0);
        let (mut la, mut lb) = (0u128, 0u128);
        while i < ra.len() && j < rb.len() {
            let (ba, na) = ra[i];
            let (bb, nb) = rb[j];
            if ba != bb {
                return ba.cmp(&bb);
            }
            let m = (na - la).min(nb - lb);
            la += m;
            lb += m;
            if la == na {
                i += 1;
                la = 0;
            }
            if lb == nb {
                j += 1;
                lb = 0;
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        let mut tokens: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (b, n) in self.runs() {
            if !b && n >= DISPLAY_RUN_MIN {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(format!("0*{n}"));
            } else {
                let c = if b { '1' } else { '0' };
                cur.extend(std::iter::repeat_n(c, n as usize));
            }
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }
        f.write_str(&tokens.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Whitespace-separated tokens, each a bit string or `0*<n>`; `ε` is empty.
    fn from_str(s: &str) -> Result<Word, WordError> {
        let mut b = WordBuilder::new();
        for tok in s.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(n) = tok.strip_prefix("0*") {
                let n: u128 = n.parse().map_err(|_| WordError::Parse(tok.to_string()))?;
                b.push_zeros(n);
                continue;
            }
            for c in tok.chars() {
                match c {
                    '0' => b.push(false),
                    '1' => b.push(true),
                    _ => return Err(WordError::Parse(tok.to_string())),
                }
            }
        }
        Ok(b.finish())
    }
}

/// Letterwise `0 -> 00`, `1 -> 01`, `# -> 11`.
pub fn encode(t: &[Letter]) -> Word {
    let mut b = WordBuilder::new();
    for l in t {
        match l {
            Letter::Zero => b.push_zeros(2),
            Letter::One => b.push_bits(&[false, true]),
            Letter::Hash => b.push_bits(&[true, true]),
        }
    }
    b.finish()
}

pub fn letters(s: &str) -> Result<Vec<Letter>, WordError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(Letter::Zero),
            '1' => Ok(Letter::One),
            '#' => Ok(Letter::Hash),
            c => Err(WordError::Symbol(c)),
        })
        .collect()
}

pub fn encode_str(s: &str) -> Result<Word, WordError> {
    Ok(encode(&letters(s)?))
}

/// `code(u)` for a binary word; zero runs stay compressed.
pub fn code(u: &Word) -> Word {
    let mut b = WordBuilder::new();
    for (bit, n) in u.runs() {
        if bit {
            for _ in 0..n {
                b.push_bits(&[false, true]);
            }
        } else {
            b.push_zeros(2 * n);
        }
    }
    b.finish()
}

/// Appends `code(u) 11` to a builder.
pub fn push_coded(b: &mut WordBuilder, u: &Word) {
    b.push_word(&code(u));
    b.push_bits(&[true, true]);
}

/// `code(u1) 11 ... code(u_{k-1}) 11 u_k`.
pub fn encode_tuple(us: &[Word]) -> Result<Word, WordError> {
    let (last, init) = us.split_last().ok_or(WordError::EmptyTuple)?;
    let mut b = WordBuilder::new();
    for u in init {
        push_coded(&mut b, u);
    }
    b.push_word(last);
    Ok(b.finish())
}

/// Splits `x = code(u) 11 rest`; `None` when `x` has no such prefix.
pub fn parse_coded_prefix(x: &Word) -> Option<(Word, Word)> {
    let idx = x.run_index();
    let len = x.len();
    let mut u = WordBuilder::new();
    let mut pos = 0u128;
    loop {
        let (bit, rem) = idx.run_at(pos)?;
        if !bit {
            let pairs = rem / 2;
            u.push_zeros(pairs);
            pos += 2 * pairs;
            if rem % 2 == 1 {
                // a lone zero at an even position pairs with the 1 after it
                if pos + 1 >= len {
                    return None;
                }
                u.push(true);
                pos += 2;
            }
        } else {
            match idx.bit_at(pos + 1)? {
                true => return Some((u.finish(), x.drop_prefix(pos + 2))),
                false => return None,
            }
        }
    }
}

/// Splits `x = code(u1) 11 ... code(un) 11 rest`.
pub fn parse_coded_blocks(x: &Word, n: usize) -> Option<(Vec<Word>, Word)> {
    let mut rest = x.clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let (u, r) = parse_coded_prefix(&rest)?;
        out.push(u);
        rest = r;
    }
    Some((out, rest))
}

/// A finite prefix-free set of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixCode {
    words: Vec<Word>,
}

impl PrefixCode {
    pub fn new(mut words: Vec<Word>) -> Result<PrefixCode, WordError> {
        words.sort();
        words.dedup();
        if let Some((a, b)) = prefix_violation(&words) {
            return Err(WordError::NotPrefixCode(a, b));
        }
        Ok(PrefixCode { words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

fn prefix_violation(words: &[Word]) -> Option<(Word, Word)> {
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i != j && b.starts_with(a) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

pub fn is_prefix_code(words: &[Word]) -> bool {
    prefix_violation(words).is_none()
}

/// All binary words of length exactly `n` in lexicographic order.
pub fn words_of_len(n: usize) -> impl Iterator<Item = Word> {
    assert!(n < 64);
    (0u64..(1u64 << n)).map(move |v| {
        let bits: Vec<bool> = (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect();
        Word::from_bits(&bits)
    })
}

/// All binary words of length at most `n` in shortlex order.
pub fn words_up_to(n: usize) -> impl Iterator<Item = Word> {
    (0..=n).flat_map(words_of_len)
}

/// The prefix-minimal members of a right ideal among words of length
/// `<= l`, verifying the right-ideal law on that range.
pub fn right_ideal_code<F: Fn(&Word) -> bool>(member: F, l: usize) -> Result<PrefixCode, WordError> {
    let mut minimal: Vec<Word> = Vec::new();
    let mut min_set: HashSet<Word> = HashSet::new();
    for w in words_up_to(l) {
        let covered = (0..w.len()).any(|i| min_set.contains(&w.prefix(i)));
        if covered {
            if !member(&w) {
                let m = (0..w.len()).map(|i| w.prefix(i)).find(|p| min_set.contains(p)).unwrap();
                return Err(WordError::NotRightIdeal { member: m, extension: w });
            }
        } else if member(&w) {
            min_set.insert(w.clone());
            minimal.push(w);
        }
    }
    PrefixCode::new(minimal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_is_canonical() {
        let a = Word::zeros(100).concat(&Word::lit("1"));
        let mut b = WordBuilder::new();
        b.push_zeros(40);
        b.push_bits(&[false; 60]);
        b.push(true);
        assert_eq!(a, b.finish());
        assert_eq!(a.segments().len(), 2);
        assert_eq!(Word::lit("0010").segments().len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let w: Word = "0*300 01".parse().unwrap();
        assert_eq!(w.len(), 302);
        assert_eq!(w.to_string(), "0*301 1");
        assert_eq!("0*34 01".parse::<Word>().unwrap().to_string(), format!("{}01", "0".repeat(34)));
        assert_eq!(Word::empty().to_string(), "ε");
        assert!("012".parse::<Word>().is_err());
    }

    #[test]
    fn encodings() {
        assert_eq!(encode_str("0").unwrap(), Word::lit("00"));
        assert_eq!(encode_str("").unwrap(), Word::empty());
        assert_eq!(encode_str("01#").unwrap(), Word::lit("000111"));
        assert_eq!(encode_tuple(&[Word::lit("0"), Word::lit("1")]).unwrap(), Word::lit("00111"));
        assert_eq!(encode_tuple(&[Word::empty()]).unwrap(), Word::empty());
        assert_eq!(
            encode_tuple(&[Word::lit("1"), Word::empty(), Word::empty()]).unwrap(),
            Word::lit("011111")
        );
        assert_eq!(encode_tuple(&[]), Err(WordError::EmptyTuple));
        assert_eq!(code(&Word::zeros(100)), Word::zeros(200));
    }

    #[test]
    fn coded_prefix() {
        assert_eq!(parse_coded_prefix(&Word::lit("00111")), Some((Word::lit("0"), Word::lit("1"))));
        assert_eq!(parse_coded_prefix(&Word::lit("11")), Some((Word::empty(), Word::empty())));
        assert_eq!(parse_coded_prefix(&Word::lit("1000")), None);
        assert_eq!(parse_coded_prefix(&Word::lit("0001")), None);
        assert_eq!(parse_coded_prefix(&Word::lit("0")), None);
        let big = Word::zeros(1000).concat(&Word::lit("0111101"));
        let (u, rest) = parse_coded_prefix(&big).unwrap();
        assert_eq!(u, Word::zeros(500).concat(&Word::lit("1")));
        assert_eq!(rest, Word::lit("101"));
    }

    #[test]
    fn prefix_codes() {
        assert!(is_prefix_code(&[Word::lit("00"), Word::lit("01"), Word::lit("1")]));
        assert!(!is_prefix_code(&[Word::lit("0"), Word::lit("01")]));
        let fam: Vec<Word> = (1..=10)
            .map(|n| code(&Word::lit(&"1".repeat(n))).concat(&Word::lit("0010")))
            .collect();
        assert!(is_prefix_code(&fam));
    }

    #[test]
    fn ideal_codes() {
        let c = right_ideal_code(|x| x.bit_at(0) == Some(true), 3).unwrap();
        assert_eq!(c.words(), &[Word::lit("1")]);
        let c = right_ideal_code(|x| parse_coded_prefix(x).is_some(), 4).unwrap();
        assert_eq!(c.words(), &[Word::lit("11"), Word::lit("0011"), Word::lit("0111")]);
        let c = right_ideal_code(|_| false, 5).unwrap();
        assert!(c.is_empty());
        let bad = right_ideal_code(|x| x.len() == 1, 3);
        assert!(matches!(bad, Err(WordError::NotRightIdeal { .. })));
    }

    #[test]
    fn suffixes_and_order() {
        assert_eq!(common_suffix_len(&Word::lit("0110"), &Word::lit("1010")), 2);
        assert_eq!(common_suffix_len(&Word::lit("000"), &Word::lit("00")), 2);
        assert_eq!(common_suffix_len(&Word::lit("1"), &Word::lit("0")), 0);
        let mut v = vec![Word::lit("1"), Word::lit("00"), Word::lit("0"), Word::empty()];
        v.sort();
        assert_eq!(v, vec![Word::empty(), Word::lit("0"), Word::lit("1"), Word::lit("00")]);
    }
}
