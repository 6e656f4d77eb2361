//! Abstract truncated regular tree with per-vertex line charts, geodesics,
//! and the orbit structure of the unit group encoded as model axioms.
//!
//! The tree is purely combinatorial: vertices know their parent and the
//! chart index of each incident edge. In the ramified case orbit classes are
//! spheres about the root; in the unramified case the tree has two root
//! vertices joined by an edge and classes are spheres about its midpoint.

use thiserror::Error;

/// Hard cap on the vertex count of a truncated tree.
pub const MAX_VERTICES: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree would have {0} vertices, exceeding the cap {MAX_VERTICES}")]
    SizeCap(u128),
}

/// Which orbit geometry the tree models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RamificationCase {
    /// Orbit classes are spheres about the root vertex.
    Ramified,
    /// Orbit classes are spheres about the midpoint of the root edge.
    Unramified,
}

/// Orbit class of a vertex: in the ramified case the integer radius about
/// the root; in the unramified case the label `k` of the sphere of radius
/// `k + 1/2` about the midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitClass {
    pub case: RamificationCase,
    pub radius_label: u32,
}

#[derive(Debug, Clone)]
pub struct Vertex {
    /// Parent vertex, `None` at a root.
    pub parent: Option<usize>,
    /// Depth from the nearest root.
    pub depth: u32,
    /// Children vertex ids, in chart order.
    pub children: Vec<usize>,
    /// True when the vertex sits on the truncation boundary, so its child
    /// edges are virtual and their gluing rows must be omitted.
    pub boundary: bool,
}

/// A truncated regular tree.
///
/// Per-vertex charts index the incident edges `0..degree`: at a non-root
/// vertex the parent edge carries the last index `degree - 1` (the
/// distinguished line `(0:1)` of the matrix model) and the children occupy
/// `0..degree-1` in order; at a root the edge toward the co-root (unramified)
/// or toward the first child (ramified) carries index `0`, the base line.
#[derive(Debug, Clone)]
pub struct TruncatedTree {
    pub degree: usize,
    pub radius: u32,
    pub case: RamificationCase,
    pub vertices: Vec<Vertex>,
    /// Root vertex; in the unramified case `roots.1` is the co-root.
    pub roots: (usize, Option<usize>),
}

impl TruncatedTree {
    /// Builds the ramified-case tree: a root with `degree` children and
    /// `degree - 1` children at every later level, to depth `radius`.
    pub fn build_ramified(degree: usize, radius: u32) -> Result<Self, TreeError> {
        assert!(radius >= 1, "radius must be at least 1");
        let q = (degree - 1) as u128;
        let mut expect: u128 = 1;
        let mut layer: u128 = degree as u128;
        for _ in 0..radius {
            expect += layer;
            layer *= q;
        }
        if expect > MAX_VERTICES as u128 {
            return Err(TreeError::SizeCap(expect));
        }
        let mut tree = TruncatedTree {
            degree,
            radius,
            case: RamificationCase::Ramified,
            vertices: vec![Vertex {
                parent: None,
                depth: 0,
                children: Vec::new(),
                boundary: radius == 0,
            }],
            roots: (0, None),
        };
        tree.grow(0, degree, radius);
        Ok(tree)
    }

    /// Builds the unramified-case tree: two roots joined by an edge, each
    /// with `degree - 1` child subtrees to depth `radius`.
    pub fn build_unramified(degree: usize, radius: u32) -> Result<Self, TreeError> {
        assert!(radius >= 1);
        let q = (degree - 1) as u128;
        let mut expect: u128 = 2;
        let mut layer: u128 = 2 * q;
        for _ in 0..radius {
            expect += layer;
            layer *= q;
        }
        if expect > MAX_VERTICES as u128 {
            return Err(TreeError::SizeCap(expect));
        }
        let mut tree = TruncatedTree {
            degree,
            radius,
            case: RamificationCase::Unramified,
            vertices: vec![
                Vertex {
                    parent: None,
                    depth: 0,
                    children: Vec::new(),
                    boundary: false,
                },
                Vertex {
                    parent: None,
                    depth: 0,
                    children: Vec::new(),
                    boundary: false,
                },
            ],
            roots: (0, Some(1)),
        };
        tree.grow(0, degree - 1, radius);
        tree.grow(1, degree - 1, radius);
        Ok(tree)
    }

    fn grow(&mut self, root: usize, first_fanout: usize, radius: u32) {
        let mut frontier = vec![root];
        for depth in 1..=radius {
            let fanout = if depth == 1 {
                first_fanout
            } else {
                self.degree - 1
            };
            let mut next = Vec::new();
            for &v in &frontier {
                for _ in 0..fanout {
                    let id = self.vertices.len();
                    self.vertices.push(Vertex {
                        parent: Some(v),
                        depth,
                        children: Vec::new(),
                        boundary: depth == radius,
                    });
                    self.vertices[v].children.push(id);
                    next.push(id);
                }
            }
            frontier = next;
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Orbit class of a vertex under the encoded orbit axioms.
    pub fn orbit_of(&self, v: usize) -> OrbitClass {
        OrbitClass {
            case: self.case,
            radius_label: match self.case {
                // spheres about the root
                RamificationCase::Ramified => self.vertices[v].depth,
                // spheres of radius depth + 1/2 about the midpoint
                RamificationCase::Unramified => self.vertices[v].depth,
            },
        }
    }

    /// Unique vertex path from `s` to `t`.
    pub fn geodesic(&self, s: usize, t: usize) -> Vec<usize> {
        let mut up_s = vec![s];
        let mut up_t = vec![t];
        let mut a = s;
        let mut b = t;
        // climb to the roots
        while let Some(p) = self.vertices[a].parent {
            a = p;
            up_s.push(a);
        }
        while let Some(p) = self.vertices[b].parent {
            b = p;
            up_t.push(b);
        }
        if a != b {
            // different roots of the unramified double tree: join across the
            // root edge
            up_s.push(b);
            for &x in up_t.iter().rev().skip(1) {
                up_s.push(x);
            }
            return dedup_path(up_s);
        }
        // drop the common tail
        while up_s.len() >= 2
            && up_t.len() >= 2
            && up_s[up_s.len() - 1] == up_t[up_t.len() - 1]
            && up_s[up_s.len() - 2] == up_t[up_t.len() - 2]
        {
            up_s.pop();
            up_t.pop();
        }
        for &x in up_t.iter().rev().skip(1) {
            up_s.push(x);
        }
        dedup_path(up_s)
    }

    pub fn distance(&self, s: usize, t: usize) -> usize {
        self.geodesic(s, t).len() - 1
    }

    /// Chart index of the edge `{parent(v), v}` at the parent: the position
    /// of `v` among the parent's children.
    pub fn child_slot(&self, v: usize) -> Option<usize> {
        let p = self.vertices[v].parent?;
        self.vertices[p].children.iter().position(|&c| c == v)
    }

    /// Representative vertex of each orbit class, shallow chain from the
    /// root: class k is the k-th vertex on the leftmost path.
    pub fn class_representatives(&self) -> Vec<usize> {
        let mut reps = vec![self.roots.0];
        let mut cur = self.roots.0;
        for _ in 1..=self.radius {
            cur = self.vertices[cur].children[0];
            reps.push(cur);
        }
        reps
    }

    /// Debug export: `parent child line_index` per edge, newline-delimited,
    /// with orbit labels appended as a comment column.
    pub fn export_edges(&self) -> String {
        let mut out = String::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for (slot, &c) in vert.children.iter().enumerate() {
                out.push_str(&format!(
                    "{} {} {} # class {}\n",
                    v,
                    c,
                    slot,
                    self.orbit_of(c).radius_label
                ));
            }
        }
        if let (r0, Some(r1)) = self.roots {
            out.push_str(&format!("{} {} {} # root edge\n", r0, r1, 0));
        }
        out
    }
}

fn dedup_path(p: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(p.len());
    for x in p {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts() {
        // Q=3, R=1: root + 4 neighbors
        let t = TruncatedTree::build_ramified(4, 1).unwrap();
        assert_eq!(t.len(), 5);
        // Q=3, R=2: 1 + 4 + 4*3
        let t = TruncatedTree::build_ramified(4, 2).unwrap();
        assert_eq!(t.len(), 17);
        // Q=9, R=3: 1 + 10*(1 + 9 + 81)
        let t = TruncatedTree::build_ramified(10, 3).unwrap();
        assert_eq!(t.len(), 911);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            TruncatedTree::build_ramified(28, 5),
            Err(TreeError::SizeCap(_))
        ));
    }

    #[test]
    fn degrees_are_regular() {
        let t = TruncatedTree::build_ramified(4, 2).unwrap();
        for (v, vert) in t.vertices.iter().enumerate() {
            let incident = vert.children.len() + usize::from(vert.parent.is_some());
            if vert.boundary {
                // virtual edges make up the rest
                assert!(incident <= t.degree, "vertex {v}");
            } else {
                assert_eq!(incident, t.degree, "vertex {v}");
            }
        }
    }

    #[test]
    fn orbit_classes() {
        let t = TruncatedTree::build_ramified(4, 2).unwrap();
        assert_eq!(t.orbit_of(0).radius_label, 0);
        for &c in &t.vertices[0].children {
            assert_eq!(t.orbit_of(c).radius_label, 1);
        }
        // unramified: both roots share the class label 0 (radius 1/2 sphere)
        let t = TruncatedTree::build_unramified(4, 2).unwrap();
        assert_eq!(t.orbit_of(0), t.orbit_of(1));
    }

    #[test]
    fn geodesics() {
        let t = TruncatedTree::build_ramified(4, 3).unwrap();
        // trivial path
        assert_eq!(t.geodesic(0, 0), vec![0]);
        // straight chain
        let reps = t.class_representatives();
        assert_eq!(t.geodesic(0, reps[2]), vec![0, reps[1], reps[2]]);
        // two depth-3 leaves in different branches meet at the deepest
        // common ancestor; length = sum of depths above the meet
        let leaf_a = *t.vertices[reps[2]].children.first().unwrap();
        let other_branch = t.vertices[0].children[2];
        let leaf_b = t.vertices[other_branch].children[0];
        let path = t.geodesic(leaf_a, leaf_b);
        assert_eq!(path.first(), Some(&leaf_a));
        assert_eq!(path.last(), Some(&leaf_b));
        assert_eq!(path.len() - 1, 3 + 2);
        // symmetric
        let mut rev = t.geodesic(leaf_b, leaf_a);
        rev.reverse();
        assert_eq!(path, rev);
    }

    #[test]
    fn unramified_geodesic_crosses_root_edge() {
        let t = TruncatedTree::build_unramified(4, 2).unwrap();
        let a = t.vertices[0].children[0];
        let b = t.vertices[1].children[0];
        assert_eq!(t.geodesic(a, b), vec![a, 0, 1, b]);
        assert_eq!(t.distance(0, 1), 1);
    }

    #[test]
    fn export_format() {
        let t = TruncatedTree::build_ramified(4, 1).unwrap();
        let dump = t.export_edges();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("0 1 0"));
    }
}
