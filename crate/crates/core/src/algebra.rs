//! The truncated tensor algebra `T^N(R^d)`.
//!
//! An element is a sequence of homogeneous levels `(v_0, v_1, …, v_N)` with
//! `v_n ∈ (R^d)^{⊗n}`. The product is the truncated concatenation (Cauchy)
//! product `w_n = Σ_{k=0}^{n} u_k ⊗ v_{n-k}`, dropping every level above `N`.
//! Basis elements of level `n` are indexed by words of length `n` over the
//! letters `1..=d`, enumerated lexicographically.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{DenseTensor, Shape};

/// A word `i1 i2 … in` over the alphabet `1..=d`; the empty word is level 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > d) {
            return Err(Error::LetterOutOfRange { letter, d });
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Position of this word among the `d^n` words of its length.
    pub fn to_index(&self, d: usize) -> Result<usize> {
        self.0.iter().try_fold(0usize, |acc, &l| {
            if l == 0 || l > d {
                Err(Error::LetterOutOfRange { letter: l, d })
            } else {
                Ok(acc * d + (l - 1))
            }
        })
    }

    /// Inverse of [`Word::to_index`] for words of length `n`.
    pub fn from_index(mut index: usize, d: usize, n: usize) -> Result<Self> {
        let count = d.checked_pow(n as u32).unwrap_or(usize::MAX);
        if index >= count {
            return Err(Error::IndexOutOfRange {
                index: vec![index],
                shape: vec![count],
            });
        }
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = index % d + 1;
            index /= d;
        }
        Ok(Word(letters))
    }

    /// All words of length `n` in lexicographic order.
    pub fn all(d: usize, n: usize) -> impl Iterator<Item = Word> {
        let count = if n == 0 { 1 } else { d.pow(n as u32) };
        (0..count).map(move |k| Word::from_index(k, d, n).expect("index in range"))
    }
}

/// Flat index of `word` within its level of `T^N(R^d)`.
pub fn word_to_index(word: &Word, d: usize) -> Result<usize> {
    word.to_index(d)
}

/// `dim T^N(R^d) = (d^{N+1} - 1)/(d - 1)`, the number of words of length `<= N`.
pub fn truncated_dim(d: usize, depth: usize) -> usize {
    match d {
        0 => 1,
        1 => depth + 1,
        _ => (d.pow(depth as u32 + 1) - 1) / (d - 1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTensor<S> {
    d: usize,
    depth: usize,
    levels: Vec<DenseTensor<S>>,
}

impl<S: Scalar> TruncatedTensor<S> {
    /// Builds an element from its levels `0..=N`; level `n` must have shape `(d,…,d)`.
    pub fn from_levels(d: usize, levels: Vec<DenseTensor<S>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("alphabet size d must be at least 1".into()));
        }
        if levels.is_empty() {
            return Err(Error::Invalid(
                "a truncated tensor needs at least level 0".into(),
            ));
        }
        for (n, level) in levels.iter().enumerate() {
            let expected = Shape::cube(d, n)?;
            if level.shape() != &expected {
                return Err(Error::ShapeMismatch {
                    expected: expected.into(),
                    found: level.dims().to_vec(),
                });
            }
        }
        Ok(TruncatedTensor {
            d,
            depth: levels.len() - 1,
            levels,
        })
    }

    /// Builds an element from flat row-major level arrays.
    pub fn from_flat_levels(d: usize, levels: Vec<Vec<S>>) -> Result<Self> {
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(n, coeffs)| DenseTensor::new(Shape::cube(d, n)?, coeffs))
            .collect::<Result<Vec<_>>>()?;
        TruncatedTensor::from_levels(d, levels)
    }

    pub fn zero(d: usize, depth: usize) -> Result<Self> {
        let levels = (0..=depth)
            .map(|n| Shape::cube(d, n).map(DenseTensor::zeros))
            .collect::<Result<Vec<_>>>()?;
        TruncatedTensor::from_levels(d, levels)
    }

    /// The unit `1 = (1, 0, …, 0)`.
    pub fn unit(d: usize, depth: usize) -> Result<Self> {
        let mut x = TruncatedTensor::zero(d, depth)?;
        x.levels[0] = DenseTensor::scalar(S::one());
        Ok(x)
    }

    /// The basis element `e_w`, zero when the word is longer than `N`.
    pub fn basis_word(d: usize, depth: usize, word: &Word) -> Result<Self> {
        let mut x = TruncatedTensor::zero(d, depth)?;
        let index = word.to_index(d)?;
        if let Some(level) = x.levels.get_mut(word.len()) {
            let shape = level.shape().clone();
            level.set(&shape.unravel(index), S::one())?;
        }
        Ok(x)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Truncation level `N`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn levels(&self) -> &[DenseTensor<S>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&DenseTensor<S>> {
        self.levels.get(n)
    }

    /// Level-0 scalar.
    pub fn scalar_part(&self) -> &S {
        &self.levels[0].coeffs()[0]
    }

    /// Coefficient of `e_w`; zero for words longer than `N`.
    pub fn coeff(&self, word: &Word) -> Result<S> {
        let index = word.to_index(self.d)?;
        Ok(match self.levels.get(word.len()) {
            Some(level) => level.coeffs()[index].clone(),
            None => S::zero(),
        })
    }

    /// Highest non-zero level, `None` for the zero element.
    pub fn degree(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.depth != other.depth {
            return Err(Error::AlgebraMismatch {
                left_d: self.d,
                left_n: self.depth,
                right_d: other.d,
                right_n: other.depth,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(self.with_levels(levels))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_levels(DenseTensor::neg)
    }

    pub fn scale(&self, lambda: &S) -> Self {
        self.map_levels(|l| l.scale(lambda))
    }

    fn map_levels(&self, f: impl Fn(&DenseTensor<S>) -> DenseTensor<S>) -> Self {
        self.with_levels(self.levels.iter().map(f).collect())
    }

    fn with_levels(&self, levels: Vec<DenseTensor<S>>) -> Self {
        TruncatedTensor {
            d: self.d,
            depth: self.depth,
            levels,
        }
    }

    /// Truncated concatenation product.
    pub fn concat_product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = TruncatedTensor::zero(self.d, self.depth)?;
        for n in 0..=self.depth {
            for k in 0..=n {
                let (a, b) = (&self.levels[k], &other.levels[n - k]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                out.levels[n].add_assign(&a.tensor_product(b))?;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse, defined iff the level-0 scalar `a` is non-zero.
    ///
    /// With `x̂ = x/a`, the element `1 - x̂` has no level-0 part, so its
    /// `(N+1)`-th power vanishes under truncation and
    /// `x̂^{-1} = Σ_{n=0}^{N} (1 - x̂)^n` is exact. Then `x^{-1} = x̂^{-1}/a`.
    pub fn inverse(&self) -> Result<Self> {
        let a = self.scalar_part().clone();
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        let a_inv = S::one() / a;
        let unit = TruncatedTensor::unit(self.d, self.depth)?;
        let nilpotent = unit.sub(&self.scale(&a_inv))?;
        let mut power = unit.clone();
        let mut sum = unit;
        for _ in 0..self.depth {
            power = power.concat_product(&nilpotent)?;
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&a_inv))
    }

    /// Keeps levels `0..=M`, the projection `π_M`.
    pub fn project(&self, target: usize) -> Result<Self> {
        if target > self.depth {
            return Err(Error::ProjectionLevel {
                target,
                depth: self.depth,
            });
        }
        Ok(TruncatedTensor {
            d: self.d,
            depth: target,
            levels: self.levels[..=target].to_vec(),
        })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.depth == other.depth
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.approx_eq(b))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        self.levels
            .iter()
            .zip(&other.levels)
            .try_fold(0.0f64, |m, (a, b)| Ok(m.max(a.max_abs_diff(b)?)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> TruncatedTensor<T> {
        TruncatedTensor {
            d: self.d,
            depth: self.depth,
            levels: self.levels.iter().map(|l| l.map(f)).collect(),
        }
    }
}
