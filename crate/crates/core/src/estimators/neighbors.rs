//! Exact k-th nearest neighbor distances.
//!
//! A k-d tree is used up to [`TREE_MAX_DIM`] dimensions and a brute-force scan
//! above that. Both paths accumulate squared distances over coordinates in the
//! same order, so they return bit-identical results.

use crate::numstats::SampleSet;
use crate::par::Exec;

pub const TREE_MAX_DIM: usize = 16;
const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    Auto,
    Tree,
    BruteForce,
}

/// Distance from each sample to its k-th nearest other sample (the sample
/// itself is excluded by index, duplicates count as neighbors at distance 0).
pub fn kth_neighbor_distances(s: &SampleSet, k: usize, strategy: SearchStrategy, exec: Exec) -> Vec<f64> {
    let use_tree = match strategy {
        SearchStrategy::Auto => s.d() <= TREE_MAX_DIM,
        SearchStrategy::Tree => true,
        SearchStrategy::BruteForce => false,
    };
    if use_tree {
        let tree = KdTree::build(s);
        exec.map(s.n(), |i| tree.kth_distance(i, k).sqrt())
    } else {
        exec.map(s.n(), |i| brute_kth(s, i, k).sqrt())
    }
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        acc += t * t;
    }
    acc
}

/// Sorted buffer of the k smallest squared distances seen so far.
struct KBest {
    k: usize,
    dists: Vec<f64>,
}

impl KBest {
    fn new(k: usize) -> Self {
        Self {
            k,
            dists: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    fn worst(&self) -> f64 {
        if self.dists.len() < self.k {
            f64::INFINITY
        } else {
            self.dists[self.k - 1]
        }
    }

    #[inline]
    fn push(&mut self, d: f64) {
        if d >= self.worst() {
            return;
        }
        let pos = self.dists.partition_point(|&x| x <= d);
        self.dists.insert(pos, d);
        self.dists.truncate(self.k);
    }
}

fn brute_kth(s: &SampleSet, i: usize, k: usize) -> f64 {
    let q = s.row(i);
    let mut best = KBest::new(k);
    for j in 0..s.n() {
        if j != i {
            best.push(sq_dist(q, s.row(j)));
        }
    }
    best.worst()
}

enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

struct KdTree<'a> {
    s: &'a SampleSet,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    fn build(s: &'a SampleSet) -> Self {
        let mut tree = Self {
            s,
            order: (0..s.n()).collect(),
            nodes: Vec::new(),
        };
        tree.build_node(0, s.n());
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let d = self.s.d();
        let (mut dim, mut spread) = (0, -1.0);
        for j in 0..d {
            let (lo, hi) =
                self.order[start..end]
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                        let v = self.s.row(i)[j];
                        (lo.min(v), hi.max(v))
                    });
            if hi - lo > spread {
                spread = hi - lo;
                dim = j;
            }
        }
        if spread <= 0.0 {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mid = start + (end - start) / 2;
        let s = self.s;
        self.order[start..end]
            .select_nth_unstable_by(mid - start, |&a, &b| s.row(a)[dim].total_cmp(&s.row(b)[dim]));
        let value = s.row(self.order[mid])[dim];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    fn kth_distance(&self, i: usize, k: usize) -> f64 {
        let mut best = KBest::new(k);
        self.search(0, i, self.s.row(i), &mut best);
        best.worst()
    }

    fn search(&self, node: usize, qi: usize, q: &[f64], best: &mut KBest) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &j in &self.order[start..end] {
                    if j != qi {
                        best.push(sq_dist(q, self.s.row(j)));
                    }
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, qi, q, best);
                if diff * diff <= best.worst() {
                    self.search(far, qi, q, best);
                }
            }
        }
    }
}
