//! Permutations of `0..n` in one-line notation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0, …, n-1}`; `p.apply(i) == p.as_slice()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl Perm {
    pub fn new(v: Vec<usize>) -> Result<Perm> {
        let n = v.len();
        let mut seen = vec![false; n];
        for &x in &v {
            if x >= n || seen[x] {
                return Err(Error::usage(format!("{v:?} is not a permutation of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Perm(v))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// `i ↦ i + k mod n`.
    pub fn rotation(n: usize, k: i64) -> Perm {
        if n == 0 {
            return Perm(vec![]);
        }
        let m = n as i64;
        Perm((0..m).map(|i| (i + k).rem_euclid(m) as usize).collect())
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0,1],[2,3]]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut p: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(Error::usage(format!("cycle entry {x} out of range 0..{n}")));
                }
                p[x] = c[(k + 1) % c.len()];
            }
        }
        Perm::new(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x] = i;
        }
        Perm(r)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Perm {
        let n = self.len();
        let mut out = vec![0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.pow_apply(i, k);
        }
        Perm(out)
    }

    /// `self^k(i)` without building the power.
    pub fn pow_apply(&self, i: usize, k: i64) -> usize {
        let cyc = self.cycle_of(i);
        let pos = cyc.iter().position(|&x| x == i).unwrap();
        let len = cyc.len() as i64;
        cyc[((pos as i64 + k).rem_euclid(len)) as usize]
    }

    fn cycle_of(&self, i: usize) -> Vec<usize> {
        let mut c = vec![i];
        let mut x = self.0[i];
        while x != i {
            c.push(x);
            x = self.0[x];
        }
        c
    }

    /// Cycles in order of their least element, each starting at that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if !seen[i] {
                let c = self.cycle_of(i);
                for &x in &c {
                    seen[x] = true;
                }
                out.push(c);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            acc / gcd(acc, l) * l
        })
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Perm).collect()
    }

    /// Precomputed cycle positions for fast powers.
    pub fn power_table(&self) -> PowerTable {
        let n = self.len();
        let mut cycle_id = vec![0; n];
        let mut pos = vec![0; n];
        let cycles = self.cycles();
        for (ci, c) in cycles.iter().enumerate() {
            for (k, &x) in c.iter().enumerate() {
                cycle_id[x] = ci;
                pos[x] = k;
            }
        }
        PowerTable { cycles, cycle_id, pos }
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        for c in self.cycles().iter().filter(|c| c.len() > 1) {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Cycle decomposition cached for `p^k(i)` lookups.
#[derive(Clone, Debug)]
pub struct PowerTable {
    cycles: Vec<Vec<usize>>,
    cycle_id: Vec<usize>,
    pos: Vec<usize>,
}

impl PowerTable {
    #[inline]
    pub fn apply(&self, i: usize, k: i64) -> usize {
        let c = &self.cycles[self.cycle_id[i]];
        let len = c.len() as i64;
        c[((self.pos[i] as i64 + k).rem_euclid(len)) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::new(vec![0, 0]).is_err());
        assert!(Perm::new(vec![2, 0]).is_err());
        assert!(Perm::new(vec![]).is_ok());
    }

    #[test]
    fn compose_and_inverse() {
        let p = Perm::new(vec![1, 2, 0]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Perm::identity(3));
        assert_eq!(p.pow(3), Perm::identity(3));
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.order(), 3);
    }

    #[test]
    fn power_table_matches_pow() {
        let p = Perm::from_cycles(5, &[vec![0, 3], vec![1, 2, 4]]).unwrap();
        let t = p.power_table();
        for k in -7..7 {
            let q = p.pow(k);
            for i in 0..5 {
                assert_eq!(t.apply(i, k), q.apply(i));
            }
        }
    }

    #[test]
    fn all_counts() {
        assert_eq!(Perm::all(0).len(), 1);
        assert_eq!(Perm::all(3).len(), 6);
    }
}
