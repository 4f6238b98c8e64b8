//! Permutations of {0, .., n-1}, stored as the image vector.
//!
//! Composition is written left to right: `a.then(b)` applies a first.
//! External JSON uses 1-based image lists.

use rand::Rng;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a permutation: {0}")]
pub struct NotAPermutation(pub String);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, NotAPermutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(NotAPermutation(format!("{:?}", images)));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Swap of a and b (0-based), identity elsewhere.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(a < n && b < n && a != b);
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    /// The cycle (c[0] c[1] .. c[k-1]) fixing everything else.
    pub fn cycle(n: usize, points: &[usize]) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for w in 0..points.len() {
            images[points[w]] = points[(w + 1) % points.len()];
        }
        Permutation::from_images(images).expect("cycle points must be distinct")
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        // Fisher-Yates
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Apply self first, then other.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Some((a, b)) with a < b when the permutation swaps exactly one pair.
    pub fn as_transposition(&self) -> Option<(usize, usize)> {
        let sup = self.support();
        match sup.as_slice() {
            &[a, b] if self.apply(a) == b && self.apply(b) == a => Some((a, b)),
            _ => None,
        }
    }

    /// Cycle lengths (>= 2) in increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len >= 2 {
                lens.push(len);
            }
        }
        lens.sort_unstable();
        lens
    }

    /// 1-based images for external formats.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self, NotAPermutation> {
        let shifted: Vec<usize> = images
            .iter()
            .map(|&v| v.checked_sub(1).ok_or_else(|| NotAPermutation(format!("{:?}", images))))
            .collect::<Result<_, _>>()?;
        Permutation::from_images(shifted)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.to_one_based().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order_is_left_to_right() {
        // a = (1 2), b = (2 3) on three points (0-based: (0 1), (1 2)).
        let a = Permutation::transposition(3, 0, 1);
        let b = Permutation::transposition(3, 1, 2);
        let ab = a.then(&b);
        // apply a first: 0 -> 1, then b: 1 -> 2
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab.apply(1), 0);
        assert_eq!(ab.apply(2), 1);
        // the other order differs
        assert_ne!(ab, b.then(&a));
    }

    #[test]
    fn inverse_undoes() {
        let c = Permutation::cycle(5, &[0, 2, 4]);
        assert!(c.then(&c.inverse()).is_identity());
        assert!(c.inverse().then(&c).is_identity());
    }

    #[test]
    fn bijection_check() {
        assert!(Permutation::from_images(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 2]).is_err());
        assert!(Permutation::from_images(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn transposition_recognition() {
        let t = Permutation::transposition(4, 1, 3);
        assert_eq!(t.as_transposition(), Some((1, 3)));
        assert_eq!(Permutation::identity(4).as_transposition(), None);
        assert_eq!(Permutation::cycle(4, &[0, 1, 2]).as_transposition(), None);
    }

    #[test]
    fn cycle_type_and_one_based_roundtrip() {
        let p = Permutation::cycle(6, &[0, 1]).then(&Permutation::cycle(6, &[2, 3, 4]));
        assert_eq!(p.cycle_type(), vec![2, 3]);
        let ob = p.to_one_based();
        assert_eq!(Permutation::from_one_based(&ob).unwrap(), p);
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }
}
