//! Reduced words in a free group and Fox derivatives evaluated in a finite
//! group ring `(Z/n)[Q]`.
//!
//! Derivatives follow the left-to-right recursion
//! `∂_i(x_j v) = δ_ij + x̄_j ∂_i(v)` and, for inverse letters,
//! `∂_i(x_j⁻¹ v) = −x̄_j⁻¹ δ_ij + x̄_j⁻¹ ∂_i(v)`. The second rule comes from
//! `0 = ∂_i(x_j x_j⁻¹)`.

use std::fmt;

use thiserror::Error;

use crate::fingroup::{FiniteGroup, GroupElement, Subgroup};
use crate::grpring::{GroupRing, RingElem};
use crate::zmodlin::ResidueRing;

pub const MAX_WORD_LENGTH: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoxError {
    #[error("generator index {index} outside 1..={rank}")]
    BadGeneratorIndex { index: usize, rank: usize },
    #[error("derivative index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word length {0} exceeds the limit of {MAX_WORD_LENGTH}")]
    WordTooLong(usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("generator images do not generate the target group")]
    ImagesDoNotGenerate,
    #[error("word of rank {word} used with a context of rank {ctx}")]
    RankMismatch { word: usize, ctx: usize },
}

/// A letter `x_g^{±1}`; `generator` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A freely reduced word in `x_1, …, x_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverted()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl FreeWord {
    pub fn empty(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// `x_i` with `i` one-based.
    pub fn generator(rank: usize, i: usize) -> Result<Self, FoxError> {
        Self::reduce(rank, &[(i, 1)])
    }

    /// Free reduction of `(generator index 1..=r, ±1)` pairs.
    pub fn reduce(rank: usize, raw: &[(usize, i32)]) -> Result<Self, FoxError> {
        if raw.len() > MAX_WORD_LENGTH {
            return Err(FoxError::WordTooLong(raw.len()));
        }
        let mut letters = Vec::with_capacity(raw.len());
        for &(index, exp) in raw {
            if index == 0 || index > rank {
                return Err(FoxError::BadGeneratorIndex { index, rank });
            }
            if exp != 1 && exp != -1 {
                return Err(FoxError::Parse(format!("exponent {exp} is not ±1")));
            }
            push_reduced(&mut letters, Letter::new(index - 1, exp < 0));
        }
        Ok(FreeWord { rank, letters })
    }

    pub fn from_letters(rank: usize, letters: &[Letter]) -> Result<Self, FoxError> {
        let raw: Vec<(usize, i32)> =
            letters.iter().map(|l| (l.generator + 1, if l.inverse { -1 } else { 1 })).collect();
        Self::reduce(rank, &raw)
    }

    /// Parses `x1 x2^-1 x1^3`; `1` or an empty string is the empty word.
    /// Without an explicit rank the largest generator index is used.
    pub fn parse(text: &str, rank: Option<usize>) -> Result<Self, FoxError> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| FoxError::Parse(format!("bad exponent in {token:?}")))?),
                None => (token, 1),
            };
            let index = base
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| FoxError::Parse(format!("expected x<index>, found {token:?}")))?;
            let count = exp.unsigned_abs() as usize;
            if raw.len() + count > MAX_WORD_LENGTH {
                return Err(FoxError::WordTooLong(raw.len() + count));
            }
            raw.extend(std::iter::repeat_n((index, exp.signum() as i32), count));
        }
        let rank = rank.unwrap_or_else(|| raw.iter().map(|&(i, _)| i).max().unwrap_or(0));
        Self::reduce(rank, &raw)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn concat(&self, other: &FreeWord) -> Result<Self, FoxError> {
        let rank = self.rank.max(other.rank);
        let len = self.len() + other.len();
        if len > MAX_WORD_LENGTH {
            return Err(FoxError::WordTooLong(len));
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(FreeWord { rank, letters })
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> Result<Self, FoxError> {
        a.concat(b)?.concat(&a.inverse())?.concat(&b.inverse())
    }

    pub fn pow(&self, k: i64) -> Result<Self, FoxError> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base)?;
        }
        Ok(out)
    }

    /// Image in `Z^r`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.rank];
        for l in &self.letters {
            sums[l.generator] += if l.inverse { -1 } else { 1 };
        }
        sums
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * if l.inverse { -1 } else { 1 };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "x{}", l.generator + 1)?;
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A finite quotient `π: F_r → Q` together with the ring `(Z/n)[Q]`.
#[derive(Debug, Clone)]
pub struct QuotientContext {
    rank: usize,
    images: Vec<usize>,
    ring: GroupRing,
}

impl QuotientContext {
    /// `images[i]` is the element index of `π(x_{i+1})` in `q`.
    pub fn new<E: GroupElement>(q: &FiniteGroup<E>, images: Vec<usize>, base: ResidueRing) -> Result<Self, FoxError> {
        if images.iter().any(|&i| i >= q.order()) || Subgroup::generated(q, &images).order() != q.order() {
            return Err(FoxError::ImagesDoNotGenerate);
        }
        Ok(QuotientContext { rank: images.len(), images, ring: GroupRing::from_group(base, q) })
    }

    /// Sends `x_i` to the `i`-th generator of `q`.
    pub fn from_generators<E: GroupElement>(q: &FiniteGroup<E>, base: ResidueRing) -> Result<Self, FoxError> {
        Self::new(q, q.generators().to_vec(), base)
    }

    /// Uses an existing ring; `images` index into its group.
    pub fn with_ring(ring: GroupRing, images: Vec<usize>) -> Result<Self, FoxError> {
        let t = ring.table();
        let mut seen = vec![false; t.order()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &s in &images {
                if s >= t.order() {
                    return Err(FoxError::ImagesDoNotGenerate);
                }
                let y = t.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.contains(&false) {
            return Err(FoxError::ImagesDoNotGenerate);
        }
        Ok(QuotientContext { rank: images.len(), images, ring })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn group_order(&self) -> usize {
        self.ring.dimension()
    }

    fn check_word(&self, w: &FreeWord) -> Result<(), FoxError> {
        if w.letters.iter().any(|l| l.generator >= self.rank) {
            return Err(FoxError::RankMismatch { word: w.rank, ctx: self.rank });
        }
        Ok(())
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        let g = self.images[l.generator];
        if l.inverse {
            self.ring.table().inv(g)
        } else {
            g
        }
    }

    /// `π(w)` as an element index of `Q`.
    pub fn evaluate(&self, w: &FreeWord) -> Result<usize, FoxError> {
        self.check_word(w)?;
        let t = self.ring.table();
        Ok(w.letters.iter().fold(0, |p, &l| t.mul(p, self.letter_image(l))))
    }

    /// `x̄_i − 1`, zero-based `i`.
    pub fn x_minus_one(&self, i: usize) -> RingElem {
        self.ring.embed(self.images[i]).sub(&self.ring.one()).expect("same ring")
    }
}

/// All `r` derivatives in one pass, as coefficient vectors.
fn fox_coefficients(ctx: &QuotientContext, w: &FreeWord) -> Result<Vec<Vec<u64>>, FoxError> {
    ctx.check_word(w)?;
    let base = ctx.ring.base();
    let t = ctx.ring.table();
    let mut rows = vec![vec![0u64; ctx.group_order()]; ctx.rank];
    let mut prefix = 0;
    for &l in &w.letters {
        let next = t.mul(prefix, ctx.letter_image(l));
        let row = &mut rows[l.generator];
        if l.inverse {
            // −p·x̄⁻¹ is −(prefix after the letter)
            row[next] = base.sub(row[next], 1);
        } else {
            row[prefix] = base.add(row[prefix], 1);
        }
        prefix = next;
    }
    Ok(rows)
}

/// `π∂_i(w)` with one-based `i`.
pub fn fox_derivative(ctx: &QuotientContext, w: &FreeWord, i: usize) -> Result<RingElem, FoxError> {
    if i == 0 || i > ctx.rank {
        return Err(FoxError::IndexOutOfRange { index: i, rank: ctx.rank });
    }
    let mut rows = fox_coefficients(ctx, w)?;
    Ok(ctx.ring.element(rows.swap_remove(i - 1)).expect("dimension matches"))
}

/// `(π∂_1(w), …, π∂_r(w))`
pub fn fox_row(ctx: &QuotientContext, w: &FreeWord) -> Result<Vec<RingElem>, FoxError> {
    Ok(fox_coefficients(ctx, w)?
        .into_iter()
        .map(|c| ctx.ring.element(c).expect("dimension matches"))
        .collect())
}

/// `fox_row` flattened to a vector of length `r|Q|`.
pub fn fox_row_flat(ctx: &QuotientContext, w: &FreeWord) -> Result<Vec<u64>, FoxError> {
    Ok(fox_coefficients(ctx, w)?.concat())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionReport {
    pub holds: bool,
    /// `π(w)`
    pub lhs: Vec<u64>,
    /// `1 + Σ π∂_i(w)(x̄_i − 1)`
    pub rhs: Vec<u64>,
}

/// Checks `π(w) = 1 + Σ_i π∂_i(w)(x̄_i − 1)`.
pub fn expansion_check(ctx: &QuotientContext, w: &FreeWord) -> Result<ExpansionReport, FoxError> {
    let lhs = ctx.ring.embed(ctx.evaluate(w)?);
    let mut rhs = ctx.ring.one();
    for (i, d) in fox_row(ctx, w)?.iter().enumerate() {
        rhs = rhs.add(&d.mul(&ctx.x_minus_one(i)).expect("same ring")).expect("same ring");
    }
    Ok(ExpansionReport { holds: lhs == rhs, lhs: lhs.into_coeffs(), rhs: rhs.into_coeffs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s, Some(2)).unwrap()
    }

    fn s3_ctx(n: u64) -> QuotientContext {
        QuotientContext::from_generators(&builtin::symmetric(3), ResidueRing::new(n).unwrap()).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(FreeWord::reduce(2, &[(1, 1), (1, -1)]).unwrap().is_empty());
        assert_eq!(FreeWord::reduce(2, &[(1, 1), (2, 1), (2, -1), (1, 1)]).unwrap(), w("x1^2"));
        assert_eq!(
            FreeWord::reduce(2, &[(3, 1)]).unwrap_err(),
            FoxError::BadGeneratorIndex { index: 3, rank: 2 }
        );
    }

    #[test]
    fn parse_and_display() {
        let x = FreeWord::parse("x1 x2^-1 x1^3", None).unwrap();
        assert_eq!(x.rank(), 2);
        assert_eq!(x.len(), 5);
        assert_eq!(x.to_string(), "x1 x2^-1 x1^3");
        assert_eq!(FreeWord::parse("1", Some(2)).unwrap().to_string(), "1");
        assert!(FreeWord::parse("y1", None).is_err());
        assert!(matches!(FreeWord::parse("x1^20000", None), Err(FoxError::WordTooLong(_))));
    }

    #[test]
    fn derivative_examples() {
        let ctx = s3_ctx(9);
        let r = ctx.ring();
        let x1 = ctx.images()[0];
        let d = fox_row(&ctx, &w("x1 x2")).unwrap();
        assert_eq!(d[0], r.one());
        assert_eq!(d[1], r.embed(x1));
        let inv = fox_derivative(&ctx, &w("x1^-1"), 1).unwrap();
        assert_eq!(inv, r.embed(r.table().inv(x1)).neg());
        let comm = fox_derivative(&ctx, &w("x1 x2 x1^-1 x2^-1"), 1).unwrap();
        let t = ctx.evaluate(&w("x1 x2 x1^-1")).unwrap();
        assert_eq!(comm, r.one().sub(&r.embed(t)).unwrap());
        assert_eq!(fox_derivative(&ctx, &w("x1"), 3).unwrap_err(), FoxError::IndexOutOfRange { index: 3, rank: 2 });
    }

    #[test]
    fn expansion_examples() {
        let ctx = s3_ctx(4);
        assert!(expansion_check(&ctx, &w("x1 x2")).unwrap().holds);
        let ab = QuotientContext::from_generators(&builtin::abelian(&[2, 2]), ResidueRing::new(2).unwrap()).unwrap();
        let rep = expansion_check(&ab, &w("x1 x2 x1^-1 x2^-1")).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, ab.ring().one().into_coeffs());
    }

    #[test]
    fn contexts_must_be_generated() {
        let g = builtin::symmetric(3);
        let base = ResidueRing::new(2).unwrap();
        assert_eq!(
            QuotientContext::new(&g, vec![g.generators()[0]], base).unwrap_err(),
            FoxError::ImagesDoNotGenerate
        );
    }

    #[test]
    fn generator_row_is_basis_vector() {
        let ctx = s3_ctx(5);
        let row = fox_row(&ctx, &w("x2")).unwrap();
        assert!(row[0].is_zero());
        assert_eq!(row[1], ctx.ring().one());
        assert!(fox_row(&ctx, &FreeWord::empty(2)).unwrap().iter().all(|d| d.is_zero()));
    }
}
