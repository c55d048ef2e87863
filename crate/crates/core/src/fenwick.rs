//! Binary indexed tree over `u64` masses.
//!
//! Every node visit is tallied so coders can report how much cumulative-sum
//! work each symbol costs.

#[derive(Clone, Debug, Default)]
pub struct Fenwick {
    // 1-based; tree[0] unused
    tree: Vec<u64>,
    ops: u64,
}

impl Fenwick {
    pub fn new(len: usize) -> Self {
        Fenwick {
            tree: vec![0; len + 1],
            ops: 0,
        }
    }

    /// Builds the tree from values in `O(len)`.
    pub fn from_values(values: &[u64]) -> Self {
        let mut tree = Vec::with_capacity(values.len() + 1);
        tree.push(0);
        tree.extend_from_slice(values);
        for i in 1..tree.len() {
            let parent = i + (i & i.wrapping_neg());
            if parent < tree.len() {
                tree[parent] += tree[i];
            }
        }
        Fenwick { tree, ops: 0 }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node visits since construction.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn add(&mut self, index: usize, delta: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            self.ops += 1;
            i += i & i.wrapping_neg();
        }
    }

    pub fn sub(&mut self, index: usize, delta: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= delta;
            self.ops += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of values at indices `0..end`.
    pub fn prefix(&mut self, end: usize) -> u64 {
        let mut i = end;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            self.ops += 1;
            i &= i - 1;
        }
        s
    }

    /// Value at `index`, recovered from the tree.
    pub fn value(&mut self, index: usize) -> u64 {
        self.prefix(index + 1) - self.prefix(index)
    }

    /// Finds the index whose cumulative interval `[prefix(i), prefix(i+1))`
    /// contains `target`, together with `prefix(i)`.
    ///
    /// `target` must be below the total. Zero-valued entries are skipped.
    pub fn search(&mut self, target: u64) -> (usize, u64) {
        let n = self.len();
        let mut pos = 0usize;
        let mut rem = target;
        let mut step = if n == 0 {
            0
        } else {
            1usize << (usize::BITS - 1 - n.leading_zeros())
        };
        while step > 0 {
            let next = pos + step;
            if next <= n {
                self.ops += 1;
                if self.tree[next] <= rem {
                    rem -= self.tree[next];
                    pos = next;
                }
            }
            step >>= 1;
        }
        (pos, target - rem)
    }
}
