//! Rectangular site grids with checkerboard face labels and edge orientations.
//!
//! Row 0 is drawn at the top. Faces are indexed by their upper-left site.
//! A face is *even* when `row + col + rows + face_parity_offset` is odd, which
//! with offset 0 makes the lower-left face odd. Horizontal edges in even rows
//! point left, in odd rows right; vertical edges point down in columns where
//! `col + shift` is even and up otherwise, with the shift chosen so that the
//! arrows circulate around every even face.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub const ALL: [Corner; 4] =
        [Corner::TopLeft, Corner::TopRight, Corner::BottomLeft, Corner::BottomRight];

    fn site(self, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            Corner::TopLeft => (0, 0),
            Corner::TopRight => (0, cols - 1),
            Corner::BottomLeft => (rows - 1, 0),
            Corner::BottomRight => (rows - 1, cols - 1),
        }
    }

    fn face(self, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            Corner::TopLeft => (0, 0),
            Corner::TopRight => (0, cols - 2),
            Corner::BottomLeft => (rows - 2, 0),
            Corner::BottomRight => (rows - 2, cols - 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    Horizontal,
    VerticalUp,
    VerticalDown,
    DiagonalCorner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// The arrow runs from `endpoints.0` to `endpoints.1`.
    AsListed,
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Site ids, smaller first.
    pub endpoints: (usize, usize),
    pub orientation: Orientation,
    pub class: EdgeClass,
    /// The unique adjacent odd face, if the edge touches one.
    pub odd_face: Option<usize>,
}

impl Edge {
    pub fn tail(&self) -> usize {
        match self.orientation {
            Orientation::AsListed => self.endpoints.0,
            Orientation::Reversed => self.endpoints.1,
        }
    }

    pub fn head(&self) -> usize {
        match self.orientation {
            Orientation::AsListed => self.endpoints.1,
            Orientation::Reversed => self.endpoints.0,
        }
    }

    pub fn touches(&self, site: usize) -> bool {
        self.endpoints.0 == site || self.endpoints.1 == site
    }

    pub fn other(&self, site: usize) -> usize {
        if self.endpoints.0 == site {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub row: usize,
    pub col: usize,
    pub odd: bool,
    /// Site ids clockwise from the upper-left (as drawn with row 0 on top).
    /// A shaved face has three.
    pub cycle: Vec<usize>,
    /// Edge ids joining consecutive cycle sites, `edges[k]` joins
    /// `cycle[k]` and `cycle[k+1]` (cyclically).
    pub edges: Vec<usize>,
}

/// Plain description from which a [`Lattice`] is rebuilt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
    #[serde(default)]
    pub face_parity_offset: u8,
    #[serde(default)]
    pub shaved_corners: Vec<Corner>,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    spec: LatticeSpec,
    sites: Vec<Site>,
    site_ids: HashMap<(usize, usize), usize>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    edge_lookup: HashMap<(usize, usize), usize>,
}

pub fn build_lattice(
    rows: usize,
    cols: usize,
    boundary: Boundary,
    face_parity_offset: u8,
) -> Result<Lattice> {
    Lattice::new(LatticeSpec { rows, cols, boundary, face_parity_offset, shaved_corners: vec![] })
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Lattice> {
        let LatticeSpec { rows, cols, boundary, face_parity_offset, .. } = spec;
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidLattice(format!("{rows}x{cols}: need at least 2x2")));
        }
        if face_parity_offset > 1 {
            return Err(Error::InvalidLattice("face parity offset must be 0 or 1".into()));
        }
        if boundary == Boundary::Periodic {
            if rows % 2 == 1 || cols % 2 == 1 {
                return Err(Error::InvalidLattice(format!(
                    "periodic {rows}x{cols}: both dimensions must be even"
                )));
            }
            if rows < 4 || cols < 4 {
                return Err(Error::InvalidLattice(format!(
                    "periodic {rows}x{cols}: dimensions below 4 give repeated edges"
                )));
            }
            if !spec.shaved_corners.is_empty() {
                return Err(Error::InvalidLattice("a torus has no corners to shave".into()));
            }
        }
        let shaved: BTreeSet<Corner> = spec.shaved_corners.iter().copied().collect();
        if shaved.len() != spec.shaved_corners.len() {
            return Err(Error::InvalidLattice("corner shaved twice".into()));
        }
        if !shaved.is_empty() && (rows < 3 || cols < 3) {
            return Err(Error::InvalidLattice("corner shaving needs at least 3x3".into()));
        }

        let periodic = boundary == Boundary::Periodic;
        let is_even_face = |r: usize, c: usize| (r + c + rows + face_parity_offset as usize) % 2 == 1;
        for &corner in &shaved {
            let (fr, fc) = corner.face(rows, cols);
            if is_even_face(fr, fc) {
                return Err(Error::InvalidLattice(format!(
                    "{corner:?} corner touches an even face and cannot be shaved"
                )));
            }
        }
        let removed: BTreeSet<(usize, usize)> =
            shaved.iter().map(|c| c.site(rows, cols)).collect();

        let mut sites = Vec::new();
        let mut site_ids = HashMap::new();
        for row in 0..rows {
            for col in 0..cols {
                if !removed.contains(&(row, col)) {
                    site_ids.insert((row, col), sites.len());
                    sites.push(Site { row, col });
                }
            }
        }

        let face_rows = if periodic { rows } else { rows - 1 };
        let face_cols = if periodic { cols } else { cols - 1 };
        let face_index = |r: usize, c: usize| r * face_cols + c;
        let shift = (rows + face_parity_offset as usize + 1) % 2;

        let mut edges = Vec::new();
        let push_edge = |edges: &mut Vec<Edge>, tail: usize, head: usize, class, odd_face| {
            let (endpoints, orientation) = if tail < head {
                ((tail, head), Orientation::AsListed)
            } else {
                ((head, tail), Orientation::Reversed)
            };
            edges.push(Edge { endpoints, orientation, class, odd_face });
        };
        let odd_of = |cands: [Option<(usize, usize)>; 2]| {
            cands.into_iter().flatten().find(|&(r, c)| !is_even_face(r, c)).map(|(r, c)| face_index(r, c))
        };
        let face_exists = |r: isize, c: isize| -> Option<(usize, usize)> {
            if periodic {
                Some((r.rem_euclid(rows as isize) as usize, c.rem_euclid(cols as isize) as usize))
            } else if r >= 0 && c >= 0 && (r as usize) < face_rows && (c as usize) < face_cols {
                Some((r as usize, c as usize))
            } else {
                None
            }
        };

        // horizontal
        for r in 0..rows {
            let last = if periodic { cols } else { cols - 1 };
            for c in 0..last {
                let c2 = (c + 1) % cols;
                let (Some(&a), Some(&b)) = (site_ids.get(&(r, c)), site_ids.get(&(r, c2))) else {
                    continue;
                };
                let (tail, head) = if r % 2 == 0 { (b, a) } else { (a, b) };
                let odd = odd_of([face_exists(r as isize - 1, c as isize), face_exists(r as isize, c as isize)]);
                push_edge(&mut edges, tail, head, EdgeClass::Horizontal, odd);
            }
        }
        // vertical
        for c in 0..cols {
            let last = if periodic { rows } else { rows - 1 };
            for r in 0..last {
                let r2 = (r + 1) % rows;
                let (Some(&a), Some(&b)) = (site_ids.get(&(r, c)), site_ids.get(&(r2, c))) else {
                    continue;
                };
                let down = (c + shift) % 2 == 0;
                let (tail, head, class) =
                    if down { (a, b, EdgeClass::VerticalDown) } else { (b, a, EdgeClass::VerticalUp) };
                let odd = odd_of([face_exists(r as isize, c as isize - 1), face_exists(r as isize, c as isize)]);
                push_edge(&mut edges, tail, head, class, odd);
            }
        }
        // diagonals replacing shaved corners
        for &corner in &shaved {
            let (sr, sc) = corner.site(rows, cols);
            let (fr, fc) = corner.face(rows, cols);
            let other_col = if sc == 0 { 1 } else { cols - 2 };
            let other_row = if sr == 0 { 1 } else { rows - 2 };
            let u = site_ids[&(sr, other_col)];
            let w = site_ids[&(other_row, sc)];
            push_edge(&mut edges, u.min(w), u.max(w), EdgeClass::DiagonalCorner, Some(face_index(fr, fc)));
        }

        let mut edge_lookup = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            edge_lookup.insert(e.endpoints, k);
        }

        let mut faces = Vec::new();
        for r in 0..face_rows {
            for c in 0..face_cols {
                let (r2, c2) = ((r + 1) % rows, (c + 1) % cols);
                let cycle: Vec<usize> = [(r, c), (r, c2), (r2, c2), (r2, c)]
                    .iter()
                    .filter_map(|p| site_ids.get(p).copied())
                    .collect();
                let edges_of: Vec<usize> = (0..cycle.len())
                    .map(|k| {
                        let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                        edge_lookup[&(a.min(b), a.max(b))]
                    })
                    .collect();
                faces.push(Face { row: r, col: c, odd: !is_even_face(r, c), cycle, edges: edges_of });
            }
        }

        let mut spec = spec;
        spec.shaved_corners = shaved.into_iter().collect();
        Ok(Lattice { spec, sites, site_ids, edges, faces, edge_lookup })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.spec.rows
    }

    pub fn cols(&self) -> usize {
        self.spec.cols
    }

    pub fn boundary(&self) -> Boundary {
        self.spec.boundary
    }

    pub fn face_parity_offset(&self) -> u8 {
        self.spec.face_parity_offset
    }

    pub fn shaved_corners(&self) -> &[Corner] {
        &self.spec.shaved_corners
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn odd_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| f.odd)
    }

    pub fn even_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| !f.odd)
    }

    pub fn site_id(&self, row: usize, col: usize) -> Option<usize> {
        self.site_ids.get(&(row, col)).copied()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.edges.iter().filter(|e| e.touches(site)).map(|e| e.other(site)).collect();
        out.sort_unstable();
        out
    }

    pub fn incident_edges(&self, site: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&k| self.edges[k].touches(site)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_sites()).map(|s| self.neighbors(s).len()).max().unwrap_or(0)
    }

    /// Faces containing `site`.
    pub fn faces_of(&self, site: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].cycle.contains(&site)).collect()
    }

    /// Corners whose only face is odd, i.e. candidates for shaving.
    pub fn odd_corners(&self) -> Vec<Corner> {
        if self.spec.boundary == Boundary::Periodic {
            return vec![];
        }
        let (rows, cols) = (self.spec.rows, self.spec.cols);
        Corner::ALL
            .into_iter()
            .filter(|c| {
                let (r, col) = c.site(rows, cols);
                self.site_id(r, col).is_some() && {
                    let (fr, fc) = c.face(rows, cols);
                    self.faces[fr * (cols - 1) + fc].odd
                }
            })
            .collect()
    }

    pub fn corner_site(&self, corner: Corner) -> Option<usize> {
        let (r, c) = corner.site(self.spec.rows, self.spec.cols);
        self.site_id(r, c)
    }

    pub fn shave_corner(&self, corner: Corner) -> Result<Lattice> {
        if self.spec.boundary == Boundary::Periodic {
            return Err(Error::InvalidLattice("a torus has no corners to shave".into()));
        }
        if self.spec.shaved_corners.contains(&corner) {
            return Err(Error::InvalidLattice(format!("{corner:?} already shaved")));
        }
        let mut spec = self.spec.clone();
        spec.shaved_corners.push(corner);
        Lattice::new(spec)
    }

    /// Shortest path of sites from `a` to `b` (inclusive), ties broken by
    /// lowest site id.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.n_sites();
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([a]);
        prev[a] = a;
        while let Some(s) = queue.pop_front() {
            if s == b {
                break;
            }
            for t in self.neighbors(s) {
                if prev[t] == usize::MAX {
                    prev[t] = s;
                    queue.push_back(t);
                }
            }
        }
        let mut out = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    pub fn euler_characteristic(&self) -> isize {
        self.n_sites() as isize - self.edges.len() as isize + self.faces.len() as isize
    }
}

/// Row-major snake: even rows left to right, odd rows right to left.
/// Removed corner sites are skipped; the result must still be a path.
pub fn default_jw_order(lattice: &Lattice) -> Result<Vec<usize>> {
    if lattice.boundary() == Boundary::Periodic {
        return Err(Error::Unsupported("no canonical ordering on a torus".into()));
    }
    let mut order = Vec::with_capacity(lattice.n_sites());
    for r in 0..lattice.rows() {
        let cols: Vec<usize> = if r % 2 == 0 {
            (0..lattice.cols()).collect()
        } else {
            (0..lattice.cols()).rev().collect()
        };
        order.extend(cols.into_iter().filter_map(|c| lattice.site_id(r, c)));
    }
    for w in order.windows(2) {
        if lattice.edge_between(w[0], w[1]).is_none() {
            return Err(Error::InvalidLattice(format!(
                "snake ordering breaks between sites {} and {}",
                w[0], w[1]
            )));
        }
    }
    Ok(order)
}
