//! Permutations of {1..k} in one-line notation.

use super::GraphError;
use std::fmt;

/// A permutation of {1..k}, stored as its one-line images: `images[i-1]`
/// is the image of `i`, so the text `321` sends 1 to 3 and 3 to 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Permutation {
        Permutation {
            images: (1..=k).collect(),
        }
    }

    /// Validates that `images` is a bijection on {1..k} with k = len.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation, GraphError> {
        let k = images.len();
        let bad = |reason: String| GraphError::BadPermutation {
            text: format!("{images:?}"),
            reason,
        };
        if k == 0 {
            return Err(bad("empty image list".to_string()));
        }
        let mut seen = vec![false; k + 1];
        for &x in &images {
            if x < 1 || x > k {
                return Err(bad(format!("image {x} outside 1..={k}")));
            }
            if seen[x] {
                return Err(bad(format!("image {x} repeated")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses `321` (one digit per image, k ≤ 9) or `[3,2,1]` (any k).
    pub fn parse(text: &str) -> Result<Permutation, GraphError> {
        let bad = |reason: &str| GraphError::BadPermutation {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let images: Vec<usize> = if let Some(inner) =
            text.strip_prefix('[').and_then(|t| t.strip_suffix(']'))
        {
            inner
                .split(',')
                .map(|part| part.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad("expected comma-separated integers"))?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("expected digits or a [..] list"))?
        };
        Permutation::from_images(images)
    }

    /// Size of the set being permuted.
    pub fn k(&self) -> usize {
        self.images.len()
    }

    /// Image of `x`; both are 1-based. Panics if `x` is out of range.
    pub fn apply(&self, x: usize) -> usize {
        assert!(x >= 1 && x <= self.images.len(), "argument out of range");
        self.images[x - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// All k! permutations, in lexicographic order of their one-line
    /// images; the identity comes first.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        let mut used = vec![false; k + 1];
        fn rec(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == k {
                out.push(Permutation {
                    images: current.clone(),
                });
                return;
            }
            for x in 1..=k {
                if !used[x] {
                    used[x] = true;
                    current.push(x);
                    rec(k, current, used, out);
                    current.pop();
                    used[x] = false;
                }
            }
        }
        rec(k, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    /// One-line digits for k ≤ 9, bracketed comma list otherwise; both
    /// forms reparse to the same permutation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.len() <= 9 {
            for x in &self.images {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}
