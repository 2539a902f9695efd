use std::fmt;

use rug::Integer;

use crate::error::{GapError, Result};

/// Integer partition `λ_1 >= λ_2 >= ... >= λ_l > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(GapError::InvalidParameter(format!(
                "{parts:?} is not a weakly decreasing sequence of positive integers"
            )));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Longest row, 0 for the empty partition.
    pub fn first_row(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Length of column `j` (0-based).
    pub fn column_len(&self, j: u32) -> u32 {
        self.parts.iter().take_while(|&&p| p > j).count() as u32
    }

    /// Contents `j - i` of all cells, row by row (0-based coordinates).
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p as i64).map(move |j| j - i as i64))
    }

    /// Hook lengths of all cells.
    pub fn hooks(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p {
                let arm = p - j - 1;
                let leg = self.column_len(j) - i as u32 - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of standard Young tableaux of shape `λ`: `|λ|! / Π hooks`.
pub fn hook_dim(lambda: &Partition) -> Integer {
    let mut num = Integer::from(Integer::factorial(lambda.size()));
    let mut den = Integer::from(1);
    for h in lambda.hooks() {
        den *= h;
    }
    num /= den;
    num
}

/// All partitions of `n` with every part at most `max_part`, in reverse
/// lexicographic order.
pub fn partitions_of(n: usize, max_part: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n as u32, max_part.min(n) as u32, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Partition::new(vec![3, 1, 1]).is_ok());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::new(vec![3, 2]).unwrap().to_string(), "(3,2)");
    }

    #[test]
    fn dims() {
        assert_eq!(hook_dim(&Partition::new(vec![4]).unwrap()), 1);
        assert_eq!(hook_dim(&Partition::new(vec![2, 1]).unwrap()), 2);
        assert_eq!(hook_dim(&Partition::new(vec![3, 2]).unwrap()), 5);
        assert_eq!(hook_dim(&Partition::empty()), 1);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_of(5, 2).len(), 3);
    }

    #[test]
    fn contents_of_square() {
        let sq = Partition::new(vec![2, 2]).unwrap();
        let mut c: Vec<i64> = sq.contents().collect();
        c.sort();
        assert_eq!(c, vec![-1, 0, 0, 1]);
        assert_eq!(sq.hooks(), vec![3, 2, 2, 1]);
    }
}
