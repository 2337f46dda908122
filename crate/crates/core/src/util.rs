//! Small shared helpers.

/// Union-find with path halving; the smallest index of a class is its
/// representative.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
        }
    }

    /// Class index per element, classes numbered by least member.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut number = vec![usize::MAX; n];
        let mut count = 0;
        let mut out = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if number[r] == usize::MAX {
                number[r] = count;
                count += 1;
            }
            out[x] = number[r];
        }
        (out, count)
    }
}
