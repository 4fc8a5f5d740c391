//! Permutations of `{0, .., n-1}` and exact group orders by a Sims table.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// A permutation stored as its image array: `self.apply(i) = images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Checks that `images` is a bijection.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from disjoint cycles written with 0-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                images[a] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(images).expect("disjoint cycles")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths, largest first, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Disjoint non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.images[s] == s {
                seen[s] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// Orbit of `start` under the group generated by `gens`.
pub fn orbit(gens: &[Permutation], n: usize, start: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let x = out[k];
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        k += 1;
    }
    out
}

pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    n == 0 || orbit(gens, n, 0).len() == n
}

/// Sims table for the base `0, 1, ..., n-1`: `table[k][j]` fixes `0..k` and maps
/// `k` to `j`. Filled by Knuth's incremental insertion.
struct SimsTable {
    n: usize,
    table: Vec<Vec<Option<Permutation>>>,
    gens: Vec<Vec<Permutation>>,
}

impl SimsTable {
    fn new(n: usize) -> Self {
        let mut table = vec![vec![None; n]; n];
        for (k, row) in table.iter_mut().enumerate() {
            row[k] = Some(Permutation::identity(n));
        }
        SimsTable { n, table, gens: vec![Vec::new(); n] }
    }

    /// Membership test in the stabilizer of `0..k`.
    fn contains(&self, k: usize, g: &Permutation) -> bool {
        let mut h = g.clone();
        for level in k..self.n {
            let j = h.apply(level);
            match &self.table[level][j] {
                None => return false,
                Some(s) => h = h.then(&s.inverse()),
            }
        }
        h.is_identity()
    }

    fn add_generator(&mut self, k: usize, g: Permutation) {
        self.gens[k].push(g.clone());
        let reps: Vec<Permutation> = self.table[k].iter().flatten().cloned().collect();
        for s in reps {
            self.insert(k, s.then(&g));
        }
    }

    fn insert(&mut self, k: usize, t: Permutation) {
        let j = t.apply(k);
        match self.table[k][j].clone() {
            None => {
                self.table[k][j] = Some(t.clone());
                let gens = self.gens[k].clone();
                for r in gens {
                    self.insert(k, t.then(&r));
                }
            }
            Some(s) => {
                let h = t.then(&s.inverse());
                if k + 1 < self.n && !self.contains(k + 1, &h) {
                    self.add_generator(k + 1, h);
                }
            }
        }
    }

    fn order(&self) -> BigInt {
        self.table
            .iter()
            .map(|row| BigInt::from(row.iter().filter(|s| s.is_some()).count()))
            .fold(BigInt::one(), |a, b| a * b)
    }
}

/// Exact order of the group generated by `gens` (all of the same degree).
pub fn group_order(gens: &[Permutation]) -> BigInt {
    let Some(n) = gens.first().map(|g| g.degree()) else {
        return BigInt::one();
    };
    assert!(gens.iter().all(|g| g.degree() == n), "generators act on different sets");
    let mut table = SimsTable::new(n);
    for g in gens {
        if !table.contains(0, g) {
            table.add_generator(0, g.clone());
        }
    }
    table.order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Closure by breadth-first multiplication; only for small groups.
    fn brute_order(gens: &[Permutation]) -> usize {
        let n = gens[0].degree();
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = vec![Permutation::identity(n)];
        seen.insert(Permutation::identity(n));
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn small_orders() {
        let c3 = Permutation::from_cycles(3, &[&[0, 1, 2]]);
        assert_eq!(group_order(std::slice::from_ref(&c3)), BigInt::from(3));
        let t = Permutation::from_cycles(3, &[&[0, 1]]);
        assert_eq!(group_order(&[t, c3]), BigInt::from(6));
        let c4 = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        assert_eq!(group_order(&[c4.clone(), c4.inverse()]), BigInt::from(4));
        assert_eq!(group_order(&[]), BigInt::one());
        assert_eq!(group_order(&[Permutation::identity(5)]), BigInt::one());
    }

    #[test]
    fn symmetric_group_s12() {
        let t = Permutation::from_cycles(12, &[&[0, 1]]);
        let c: Vec<usize> = (0..12).collect();
        let long = Permutation::from_cycles(12, &[&c]);
        assert_eq!(group_order(&[t, long]), BigInt::from(479_001_600u64));
    }

    #[test]
    fn matches_brute_force_closure() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..=6);
            let k = rng.gen_range(1..=3);
            let gens: Vec<Permutation> = (0..k)
                .map(|_| {
                    let mut v: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        v.swap(i, rng.gen_range(0..=i));
                    }
                    Permutation::new(v).unwrap()
                })
                .collect();
            assert_eq!(group_order(&gens), BigInt::from(brute_order(&gens)), "{gens:?}");
        }
    }

    #[test]
    fn cycle_types_and_display() {
        let p = Permutation::from_cycles(5, &[&[0, 2], &[1, 3, 4]]);
        assert_eq!(p.cycle_type(), vec![3, 2]);
        assert_eq!(p.to_string(), "(1 3)(2 4 5)");
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Permutation::new(vec![0, 0]).is_none());
    }
}
