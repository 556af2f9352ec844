use std::fmt;

use super::TransformError;

/// A permutation σ of `{1..n}`, stored as its images `σ(1), …, σ(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Permutation, TransformError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i == 0 || i > n || seen[i - 1] {
                return Err(TransformError::InvalidPermutation(format!("{image:?} is not a permutation of 1..{n}")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { image: (1..=n).collect() }
    }

    /// Parses `"2,1,3"`.
    pub fn parse(src: &str) -> Result<Permutation, TransformError> {
        let image = src
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| TransformError::InvalidPermutation(format!("`{}` is not a positive integer", s.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &s)| s == i + 1)
    }

    /// `Some(k)` when σ lists `k+1, …, n, 1, …, k`, with `0 < k < n`.
    pub fn rotation_offset(&self) -> Option<usize> {
        let n = self.image.len();
        let k = self.image.first()? - 1;
        if k == 0 {
            return None;
        }
        self.image.iter().enumerate().all(|(i, &s)| s == (i + k) % n + 1).then_some(k)
    }

    /// `[x_{σ(1)}, …, x_{σ(n)}]`.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.image.iter().map(|&i| items[i - 1].clone()).collect()
    }

    /// Every permutation of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Permutation::parse("2,1").is_ok());
        assert!(Permutation::parse("1,1").is_err());
        assert!(Permutation::parse("0,1").is_err());
        assert!(Permutation::parse("1,3").is_err());
        assert!(Permutation::parse("a").is_err());
        assert!(Permutation::parse("1, 2 ,3").unwrap().is_identity());
    }

    #[test]
    fn rotations() {
        assert_eq!(Permutation::parse("2,3,1").unwrap().rotation_offset(), Some(1));
        assert_eq!(Permutation::parse("3,1,2").unwrap().rotation_offset(), Some(2));
        assert_eq!(Permutation::parse("2,1").unwrap().rotation_offset(), Some(1));
        assert_eq!(Permutation::parse("1,2").unwrap().rotation_offset(), None);
        assert_eq!(Permutation::parse("2,1,3").unwrap().rotation_offset(), None);
    }

    #[test]
    fn enumeration() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
        let s3: Vec<String> = Permutation::all(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(s3, ["1,2,3", "1,3,2", "2,1,3", "2,3,1", "3,1,2", "3,2,1"]);
        assert_eq!(Permutation::parse("3,1,2").unwrap().apply(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
    }
}
