//! The arrangement of translation disks and a traversal of its faces.
//!
//! Entry `(i, j)` of `M_delta(P, Q + t)` is 1 exactly when `t` lies in the disk
//! of radius `delta` around `p_i - q_j`. Inside one face of the arrangement of
//! these disks the matrix is constant, and crossing a circle changes the
//! entries of that circle only. The traversal plan walks a spanning tree of the
//! dual graph, so a consumer can keep a matrix (or a decomposition tree) in sync
//! with single-entry toggles, and probes every vertex, where lower-dimensional
//! faces may add entries.
//!
//! Disks with coincident centers share one circle; crossing it toggles all of
//! their entries. Every circle carries an extra vertex at its rightmost point,
//! so a circle without intersections still has one (closed) arc.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::free_space::PointSequence;
use crate::geometry::{
    circle_circle_intersections, dist, point_in_closed_disk, Circle, Point2, Tolerance,
};
use crate::{Entry, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub entry: Entry,
    pub circle: Circle,
}

/// One disk per matrix entry, centered at `p_i - q_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskSet {
    rows: usize,
    cols: usize,
    delta: f64,
    disks: Vec<Disk>,
}

impl DiskSet {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Disks in row-major entry order.
    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }
}

pub fn build_disks(p: &PointSequence, q: &PointSequence, delta: f64) -> Result<DiskSet> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::NegativeDelta(delta));
    }
    if !delta.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut disks = Vec::with_capacity(p.len() * q.len());
    for (i, &pi) in p.points().iter().enumerate() {
        for (j, &qj) in q.points().iter().enumerate() {
            disks.push(Disk {
                entry: (i, j),
                circle: Circle::new(pi - qj, delta),
            });
        }
    }
    Ok(DiskSet {
        rows: p.len(),
        cols: q.len(),
        delta,
        disks,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Dense class ids in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[x] = id[r];
        }
        (out, count)
    }
}

/// Groups points lying within `tol` of each other (transitively).
fn cluster(points: &[Point2], tol: f64) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x));
    let mut uf = UnionFind::new(points.len());
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b].x - points[a].x > tol {
                break;
            }
            if dist(points[a], points[b]) <= tol {
                uf.union(a, b);
            }
        }
    }
    uf.classes()
}

fn normalize(theta: f64) -> f64 {
    let a = theta % TAU;
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Disks sharing one center (and so one circle).
#[derive(Clone, Debug, PartialEq)]
pub struct DiskGroup {
    pub center: Point2,
    /// Indices into [`DiskSet::disks`], increasing.
    pub members: Vec<usize>,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub point: Point2,
    /// Groups whose circle passes through the vertex, increasing.
    pub groups: Vec<usize>,
    pub component: usize,
}

/// Counter-clockwise arc of a group's circle between consecutive vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub group: usize,
    pub from: usize,
    pub to: usize,
    pub start_angle: f64,
    /// Greater than `start_angle`, by at most a full turn.
    pub end_angle: f64,
}

impl Arc {
    pub fn covers(&self, theta: f64) -> bool {
        normalize(theta - self.start_angle) < self.end_angle - self.start_angle
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub component: usize,
    /// A point in the interior of the face.
    pub sample: Point2,
    /// Entries whose closed disk contains the sample point, sorted.
    pub entries: Vec<Entry>,
}

/// Adjacency of the two faces on either side of an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualEdge {
    pub arc: usize,
    pub inside: usize,
    pub outside: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub groups: Vec<usize>,
    /// The face surrounding the whole component.
    pub outer_face: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArrangementGraph {
    disks: DiskSet,
    tol: Tolerance,
    groups: Vec<DiskGroup>,
    vertices: Vec<Vertex>,
    arcs: Vec<Arc>,
    faces: Vec<Face>,
    dual_edges: Vec<DualEdge>,
    components: Vec<Component>,
    vertex_face: Vec<usize>,
}

/// Where an arc meets a vertex, seen from the vertex.
#[derive(Clone, Copy)]
struct ArcEnd {
    arc: usize,
    /// The arc leaves the vertex counter-clockwise around its center.
    is_start: bool,
    direction: f64,
}

impl ArcEnd {
    /// Arc side (0 inside, 1 outside) lying left of the outgoing direction.
    fn left_side(&self) -> usize {
        2 * self.arc + usize::from(!self.is_start)
    }

    fn right_side(&self) -> usize {
        2 * self.arc + usize::from(self.is_start)
    }
}

pub fn build_arrangement(ds: &DiskSet, tol: Tolerance) -> Result<ArrangementGraph> {
    let eps = tol.eps();
    let delta = ds.delta;

    let centers: Vec<Point2> = ds.disks.iter().map(|d| d.circle.center).collect();
    let (group_of, n_groups) = cluster(&centers, eps);
    let mut groups: Vec<DiskGroup> = Vec::with_capacity(n_groups);
    for (k, &g) in group_of.iter().enumerate() {
        if g == groups.len() {
            groups.push(DiskGroup {
                center: centers[k],
                members: Vec::new(),
                component: 0,
            });
        }
        groups[g].members.push(k);
    }

    if delta == 0.0 {
        return Ok(point_arrangement(ds.clone(), tol, groups));
    }

    // Raw vertices: pairwise intersections and one rightmost point per circle.
    let mut raw_points = Vec::new();
    let mut raw_groups: Vec<(usize, Option<usize>)> = Vec::new();
    for a in 0..groups.len() {
        let ca = Circle::new(groups[a].center, delta);
        raw_points.push(Point2::new(ca.center.x + delta, ca.center.y));
        raw_groups.push((a, None));
        for b in a + 1..groups.len() {
            let cb = Circle::new(groups[b].center, delta);
            if dist(ca.center, cb.center) > 2.0 * delta + eps {
                continue;
            }
            match circle_circle_intersections(ca, cb, tol) {
                Ok(x) => {
                    for pt in x.points() {
                        raw_points.push(pt);
                        raw_groups.push((a, Some(b)));
                    }
                }
                // Already merged into one group; nothing to add.
                Err(Error::IdenticalCircles) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let (vertex_of, n_vertices) = cluster(&raw_points, eps);
    let mut vertices: Vec<Vertex> = Vec::with_capacity(n_vertices);
    for (k, &v) in vertex_of.iter().enumerate() {
        if v == vertices.len() {
            vertices.push(Vertex {
                point: raw_points[k],
                groups: Vec::new(),
                component: 0,
            });
        }
        let (a, b) = raw_groups[k];
        vertices[v].groups.push(a);
        vertices[v].groups.extend(b);
    }
    for v in &mut vertices {
        v.groups.sort_unstable();
        v.groups.dedup();
    }

    // Components: circles linked through shared vertices.
    let mut uf = UnionFind::new(groups.len());
    for v in &vertices {
        for w in v.groups.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let (comp_of, n_components) = uf.classes();
    for (g, group) in groups.iter_mut().enumerate() {
        group.component = comp_of[g];
    }
    for v in &mut vertices {
        v.component = comp_of[v.groups[0]];
    }

    // Arcs: consecutive vertices around each circle.
    let mut on_circle: Vec<Vec<(f64, usize)>> = vec![Vec::new(); groups.len()];
    for (vi, v) in vertices.iter().enumerate() {
        for &g in &v.groups {
            on_circle[g].push(((v.point - groups[g].center).angle(), vi));
        }
    }
    let mut arcs = Vec::new();
    let mut first_arc = vec![0usize; groups.len()];
    for (g, list) in on_circle.iter_mut().enumerate() {
        list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        first_arc[g] = arcs.len();
        let k = list.len();
        for t in 0..k {
            let (sa, from) = list[t];
            let (mut ea, to) = list[(t + 1) % k];
            if t + 1 == k {
                ea += TAU;
            }
            arcs.push(Arc {
                group: g,
                from,
                to,
                start_angle: sa,
                end_angle: ea,
            });
        }
    }

    // Faces: around each vertex, the wedge between consecutive arc ends joins
    // the side left of one end with the side right of the next.
    let mut ends: Vec<Vec<ArcEnd>> = vec![Vec::new(); vertices.len()];
    for (ai, arc) in arcs.iter().enumerate() {
        ends[arc.from].push(ArcEnd {
            arc: ai,
            is_start: true,
            direction: normalize(arc.start_angle + FRAC_PI_2),
        });
        ends[arc.to].push(ArcEnd {
            arc: ai,
            is_start: false,
            direction: normalize(arc.end_angle - FRAC_PI_2),
        });
    }
    // Tangent circles leave a vertex in the same direction; the one turning
    // right (traversed clockwise) comes first counter-clockwise.
    let tie = (0.1 * libm::sqrt(eps / delta)).min(0.1);
    let mut sides = UnionFind::new(2 * arcs.len());
    let mut wedge_side = vec![0usize; vertices.len()];
    for (vi, list) in ends.iter_mut().enumerate() {
        list.sort_by(|a, b| a.direction.total_cmp(&b.direction));
        let k = list.len();
        for t in 0..k {
            let u = (t + 1) % k;
            let mut gap = list[u].direction - list[t].direction;
            if u == 0 {
                gap += TAU;
            }
            if k > 2 && gap < tie && list[t].is_start && !list[u].is_start {
                list.swap(t, u);
            }
        }
        for t in 0..k {
            let u = (t + 1) % k;
            sides.union(list[t].left_side(), list[u].right_side());
        }
        wedge_side[vi] = list[0].left_side();
    }
    let (face_of_side, n_faces) = sides.classes();

    // Sample points: offset from an arc midpoint by less than the distance to
    // any other circle, keeping the most clearance per face.
    let mut best: Vec<Option<(f64, Point2)>> = vec![None; n_faces];
    for (ai, arc) in arcs.iter().enumerate() {
        let c = groups[arc.group].center;
        let dir = Point2::from_angle(0.5 * (arc.start_angle + arc.end_angle));
        let mid = c + dir * delta;
        let mut gap = delta;
        for (g, other) in groups.iter().enumerate() {
            if g != arc.group {
                gap = gap.min((dist(mid, other.center) - delta).abs());
            }
        }
        let h = 0.5 * gap;
        for (side, point) in [(2 * ai, c + dir * (delta - h)), (2 * ai + 1, c + dir * (delta + h))] {
            let f = face_of_side[side];
            if best[f].map_or(true, |(bh, _)| h > bh) {
                best[f] = Some((h, point));
            }
        }
    }

    let mut graph = ArrangementGraph {
        disks: ds.clone(),
        tol,
        groups,
        vertices,
        arcs,
        faces: Vec::with_capacity(n_faces),
        dual_edges: Vec::new(),
        components: Vec::with_capacity(n_components),
        vertex_face: wedge_side.iter().map(|&s| face_of_side[s]).collect(),
    };
    let mut face_component = vec![0usize; n_faces];
    for (ai, arc) in graph.arcs.iter().enumerate() {
        let comp = graph.groups[arc.group].component;
        face_component[face_of_side[2 * ai]] = comp;
        face_component[face_of_side[2 * ai + 1]] = comp;
        graph.dual_edges.push(DualEdge {
            arc: ai,
            inside: face_of_side[2 * ai],
            outside: face_of_side[2 * ai + 1],
        });
    }
    for (f, b) in best.iter().enumerate() {
        let sample = b.expect("every face borders an arc").1;
        graph.faces.push(Face {
            component: face_component[f],
            sample,
            entries: graph.entries_at(sample),
        });
    }
    // The leftmost circle's leftmost point borders the surrounding face.
    for c in 0..n_components {
        let members: Vec<usize> = (0..graph.groups.len())
            .filter(|&g| graph.groups[g].component == c)
            .collect();
        let left = *members
            .iter()
            .min_by(|&&a, &&b| graph.groups[a].center.x.total_cmp(&graph.groups[b].center.x))
            .expect("components are nonempty");
        let arc = (first_arc[left]..graph.arcs.len())
            .find(|&a| graph.arcs[a].group == left && graph.arcs[a].covers(PI))
            .expect("arcs of a circle cover it");
        graph.components.push(Component {
            groups: members,
            outer_face: face_of_side[2 * arc + 1],
        });
    }
    Ok(graph)
}

/// With `delta = 0` every disk is a point: one vertex per distinct center and
/// one face around it.
fn point_arrangement(disks: DiskSet, tol: Tolerance, mut groups: Vec<DiskGroup>) -> ArrangementGraph {
    let n = groups.len();
    let mut graph = ArrangementGraph {
        disks,
        tol,
        groups: Vec::new(),
        vertices: Vec::with_capacity(n),
        arcs: Vec::new(),
        faces: Vec::with_capacity(n),
        dual_edges: Vec::new(),
        components: Vec::with_capacity(n),
        vertex_face: (0..n).collect(),
    };
    for g in 0..n {
        groups[g].component = g;
        let c = groups[g].center;
        let mut h: f64 = 1.0;
        for (k, other) in groups.iter().enumerate() {
            if k != g {
                h = h.min(0.5 * dist(c, other.center));
            }
        }
        let sample = Point2::new(c.x - h, c.y);
        graph.vertices.push(Vertex {
            point: c,
            groups: vec![g],
            component: g,
        });
        graph.faces.push(Face {
            component: g,
            sample,
            entries: graph.entries_at(sample),
        });
        graph.components.push(Component {
            groups: vec![g],
            outer_face: g,
        });
    }
    graph.groups = groups;
    graph
}

impl ArrangementGraph {
    pub fn delta(&self) -> f64 {
        self.disks.delta
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn disks(&self) -> &DiskSet {
        &self.disks
    }

    pub fn groups(&self) -> &[DiskGroup] {
        &self.groups
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn dual_edges(&self) -> &[DualEdge] {
        &self.dual_edges
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// A face incident to vertex `v`.
    pub fn vertex_face(&self, v: usize) -> usize {
        self.vertex_face[v]
    }

    /// Entries of the disks in group `g`, sorted.
    pub fn group_entries(&self, g: usize) -> Vec<Entry> {
        self.groups[g]
            .members
            .iter()
            .map(|&k| self.disks.disks[k].entry)
            .collect()
    }

    /// Entries whose closed disk contains `t`, sorted.
    pub fn entries_at(&self, t: Point2) -> Vec<Entry> {
        self.disks
            .disks
            .iter()
            .filter(|d| point_in_closed_disk(t, d.circle, self.tol))
            .map(|d| d.entry)
            .collect()
    }

    /// A translation left of every disk.
    pub fn default_start(&self) -> Point2 {
        let d = &self.disks.disks;
        let left = d
            .iter()
            .map(|d| d.circle.center)
            .min_by(|a, b| a.x.total_cmp(&b.x))
            .unwrap_or(Point2::ORIGIN);
        Point2::new(left.x - 2.0 * self.disks.delta - 1.0, left.y)
    }

    /// `V - E + F` for each component.
    pub fn euler_characteristics(&self) -> Vec<i64> {
        let mut chi = vec![0i64; self.components.len()];
        for v in &self.vertices {
            chi[v.component] += 1;
        }
        for a in &self.arcs {
            chi[self.groups[a.group].component] -= 1;
        }
        for f in &self.faces {
            chi[f.component] += 1;
        }
        chi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanEvent {
    /// Flip one entry. `face` is set when the accumulated entry set now
    /// matches that face; intermediate toggles of a multi-entry move carry
    /// `None`.
    Toggle { entry: Entry, face: Option<usize> },
    /// The current entry set matches `face` without any toggle.
    Visit { face: usize },
    /// Apply `toggles` temporarily to obtain the entry set at the vertex, then
    /// revert them.
    Probe { vertex: usize, toggles: Vec<Entry> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraversalPlan {
    pub start: Point2,
    pub start_entries: Vec<Entry>,
    pub events: Vec<PlanEvent>,
}

impl TraversalPlan {
    pub fn toggle_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PlanEvent::Toggle { .. }))
            .count()
    }

    pub fn probe_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PlanEvent::Probe { .. }))
            .count()
    }
}

struct Planner<'a> {
    ag: &'a ArrangementGraph,
    current: Vec<bool>,
    events: Vec<PlanEvent>,
}

impl Planner<'_> {
    fn index(&self, (i, j): Entry) -> usize {
        i * self.ag.disks.cols + j
    }

    fn move_to(&mut self, target: &[Entry], face: Option<usize>) {
        let cols = self.ag.disks.cols;
        let mut wanted = vec![false; self.current.len()];
        for &e in target {
            wanted[self.index(e)] = true;
        }
        let flips: Vec<Entry> = (0..wanted.len())
            .filter(|&k| wanted[k] != self.current[k])
            .map(|k| (k / cols, k % cols))
            .collect();
        self.current = wanted;
        self.emit(&flips, face);
    }

    fn cross(&mut self, group: usize, face: usize) {
        let flips = self.ag.group_entries(group);
        for &e in &flips {
            let k = self.index(e);
            self.current[k] = !self.current[k];
        }
        self.emit(&flips, Some(face));
    }

    fn emit(&mut self, flips: &[Entry], face: Option<usize>) {
        if flips.is_empty() {
            if let Some(face) = face {
                self.events.push(PlanEvent::Visit { face });
            }
            return;
        }
        for (k, &entry) in flips.iter().enumerate() {
            let face = if k + 1 == flips.len() { face } else { None };
            self.events.push(PlanEvent::Toggle { entry, face });
        }
    }

    fn probe(&mut self, vertex: usize) {
        let at = self.ag.entries_at(self.ag.vertices[vertex].point);
        let mut wanted = vec![false; self.current.len()];
        for &e in &at {
            wanted[self.index(e)] = true;
        }
        let cols = self.ag.disks.cols;
        let toggles = (0..wanted.len())
            .filter(|&k| wanted[k] != self.current[k])
            .map(|k| (k / cols, k % cols))
            .collect();
        self.events.push(PlanEvent::Probe { vertex, toggles });
    }
}

/// Depth-first walk over the dual graph of every component, starting from the
/// entry set at `t0`.
///
/// Each component is entered at its outer face by toggling the difference of
/// entry sets; tree edges are crossed forward and back. Every vertex is probed
/// once, right after its assigned incident face is first reached. The plan
/// ends by returning to the entry set at `t0`.
pub fn make_traversal_plan(ag: &ArrangementGraph, t0: Point2) -> TraversalPlan {
    let start_entries = ag.entries_at(t0);
    let n = ag.disks.rows * ag.disks.cols;
    let mut planner = Planner {
        ag,
        current: vec![false; n],
        events: Vec::new(),
    };
    for &e in &start_entries {
        let k = planner.index(e);
        planner.current[k] = true;
    }

    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ag.faces.len()];
    for d in &ag.dual_edges {
        adjacent[d.inside].push((d.outside, d.arc));
        adjacent[d.outside].push((d.inside, d.arc));
    }
    let mut probes_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..ag.vertices.len() {
        probes_at.entry(ag.vertex_face[v]).or_default().push(v);
    }
    let mut visited = vec![false; ag.faces.len()];

    for comp in &ag.components {
        let root = comp.outer_face;
        if visited[root] {
            continue;
        }
        planner.move_to(&ag.faces[root].entries, Some(root));
        visited[root] = true;
        for &v in probes_at.get(&root).into_iter().flatten() {
            planner.probe(v);
        }
        // (face, next neighbor to try, arc used to enter)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, usize::MAX)];
        while let Some(top) = stack.last_mut() {
            let f = top.0;
            if top.1 < adjacent[f].len() {
                let (g, arc) = adjacent[f][top.1];
                top.1 += 1;
                if !visited[g] {
                    visited[g] = true;
                    planner.cross(ag.arcs[arc].group, g);
                    for &v in probes_at.get(&g).into_iter().flatten() {
                        planner.probe(v);
                    }
                    stack.push((g, 0, arc));
                }
            } else {
                let (_, _, arc) = stack.pop().expect("nonempty");
                if let Some(parent) = stack.last() {
                    planner.cross(ag.arcs[arc].group, parent.0);
                }
            }
        }
    }
    planner.move_to(&start_entries, None);

    TraversalPlan {
        start: t0,
        start_entries,
        events: planner.events,
    }
}
