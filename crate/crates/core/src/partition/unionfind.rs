/// Union-find over cells where each link records whether two cells are
/// equal or opposite. A set that closes an odd cycle (a cell related to its
/// own negation) is forced to zero.
#[derive(Clone, Debug)]
pub(crate) struct SignedUnionFind {
    parent: Vec<usize>,
    // parity relative to the parent: 0 equal, 1 opposite
    parity: Vec<u8>,
    rank: Vec<u8>,
    zero: Vec<bool>,
}

impl SignedUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        SignedUnionFind {
            parent: (0..n).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
            zero: vec![false; n],
        }
    }

    /// Root and parity of `a` relative to the root.
    pub(crate) fn find(&mut self, a: usize) -> (usize, u8) {
        let p = self.parent[a];
        if p == a {
            return (a, 0);
        }
        let (root, par) = self.find(p);
        self.parent[a] = root;
        self.parity[a] ^= par;
        (root, self.parity[a])
    }

    /// Records x_a = x_b (`opposite == false`) or x_a = -x_b.
    pub(crate) fn union(&mut self, a: usize, b: usize, opposite: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        let rel = pa ^ pb ^ u8::from(opposite);
        if ra == rb {
            if rel != 0 {
                self.zero[ra] = true;
            }
            return;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi;
        self.parity[lo] = rel;
        self.zero[hi] |= self.zero[lo];
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
    }

    pub(crate) fn set_zero(&mut self, a: usize) {
        let (r, _) = self.find(a);
        self.zero[r] = true;
    }

    /// Signed labels, not yet canonical.
    pub(crate) fn labels(&mut self) -> Vec<i64> {
        let n = self.parent.len();
        (0..n)
            .map(|c| {
                let (root, par) = self.find(c);
                if self.zero[root] {
                    0
                } else {
                    let id = root as i64 + 1;
                    if par == 0 {
                        id
                    } else {
                        -id
                    }
                }
            })
            .collect()
    }
}
