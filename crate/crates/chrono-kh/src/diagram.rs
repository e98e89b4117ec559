//! Oriented link diagrams encoded as PD codes.
//!
//! A crossing `X[e1,e2,e3,e4]` lists its four incident edge labels in
//! counterclockwise rotation order starting at the incoming under-strand.
//! Locally we place slot 0 south, slot 1 east, slot 2 north, slot 3 west,
//! so the under-strand runs south to north. The 0-smoothing joins slot
//! pairs (0,1) and (2,3); the 1-smoothing joins (1,2) and (3,0).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

pub type Edge = u32;

#[derive(Error, Debug)]
pub enum DiagramError {
    #[error("PD parse error: {0}")]
    Parse(String),
    #[error("edge label {label} appears {count} times, expected exactly 2")]
    EdgeCount { label: Edge, count: usize },
    #[error("inconsistent strand orientation at edge {0}")]
    Orientation(Edge),
    #[error("PD code does not describe a planar diagram")]
    NonPlanar,
    #[error("invalid component index {0}")]
    BadComponent(usize),
}

/// A raw PD code plus a count of crossingless unknot components, which PD
/// notation cannot express.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PdCode {
    pub crossings: Vec<[Edge; 4]>,
    pub free_circles: usize,
}

#[derive(Deserialize)]
struct PdJson {
    pd: Vec<[Edge; 4]>,
    #[serde(default)]
    free_circles: usize,
    #[serde(default)]
    arrows: Option<Vec<u8>>,
}

impl PdCode {
    pub fn new(crossings: Vec<[Edge; 4]>) -> Self {
        PdCode { crossings, free_circles: 0 }
    }

    pub fn with_free_circles(crossings: Vec<[Edge; 4]>, free_circles: usize) -> Self {
        PdCode { crossings, free_circles }
    }

    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    /// Incidences of every edge label: (crossing, slot), in lexicographic order.
    pub fn incidences(&self) -> BTreeMap<Edge, Vec<(usize, u8)>> {
        let mut inc: BTreeMap<Edge, Vec<(usize, u8)>> = BTreeMap::new();
        for (c, tuple) in self.crossings.iter().enumerate() {
            for (s, &e) in tuple.iter().enumerate() {
                inc.entry(e).or_default().push((c, s as u8));
            }
        }
        inc
    }

    pub fn to_knottheory(&self) -> String {
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|t| format!("X[{},{},{},{}]", t[0], t[1], t[2], t[3]))
            .collect();
        format!("PD[{}]", xs.join(","))
    }

    pub fn to_json(&self) -> String {
        let pd: Vec<Vec<Edge>> = self.crossings.iter().map(|t| t.to_vec()).collect();
        serde_json::json!({ "pd": pd, "free_circles": self.free_circles }).to_string()
    }
}

/// Parse either the KnotTheory form `PD[X[1,4,2,3],...]` or the JSON form
/// `{"pd":[[1,4,2,3],...],"free_circles":0,"arrows":[0,1,...]}`.
///
/// Returns the code together with the arrow flags if the input carried any.
pub fn parse_pd(text: &str) -> Result<(PdCode, Option<Vec<bool>>), DiagramError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let parsed: PdJson =
            serde_json::from_str(trimmed).map_err(|e| DiagramError::Parse(e.to_string()))?;
        let arrows = parsed.arrows.map(|v| v.into_iter().map(|b| b != 0).collect());
        let code = PdCode::with_free_circles(parsed.pd, parsed.free_circles);
        validate_labels(&code)?;
        return Ok((code, arrows));
    }
    let inner = trimmed
        .strip_prefix("PD[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| DiagramError::Parse("expected PD[...]".into()))?;
    let mut crossings = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',').trim();
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix("X[")
            .ok_or_else(|| DiagramError::Parse(format!("expected X[...] at: {rest}")))?;
        let close = body
            .find(']')
            .ok_or_else(|| DiagramError::Parse("unterminated X[...]".into()))?;
        let nums: Result<Vec<Edge>, _> =
            body[..close].split(',').map(|p| p.trim().parse::<Edge>()).collect();
        let nums = nums.map_err(|e| DiagramError::Parse(e.to_string()))?;
        if nums.len() != 4 {
            return Err(DiagramError::Parse(format!(
                "crossing needs 4 edge labels, got {}",
                nums.len()
            )));
        }
        crossings.push([nums[0], nums[1], nums[2], nums[3]]);
        rest = &body[close + 1..];
    }
    let code = PdCode::new(crossings);
    validate_labels(&code)?;
    Ok((code, None))
}

fn validate_labels(pd: &PdCode) -> Result<(), DiagramError> {
    for (label, inc) in pd.incidences() {
        if inc.len() != 2 {
            return Err(DiagramError::EdgeCount { label, count: inc.len() });
        }
    }
    Ok(())
}

/// Direction of an edge: it flows out of `from` into `to` (crossing, slot).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EdgeDir {
    pub from: (usize, u8),
    pub to: (usize, u8),
}

/// Arrow over a crossing: `false` puts the tail on the 0-smoothing arc that
/// contains the tuple's first half-edge (slots 0,1), `true` flips it.
pub type ArrowChoice = bool;

/// A validated oriented link diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    pub pd: PdCode,
    pub signs: Vec<i8>,
    pub arrows: Vec<ArrowChoice>,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Edge labels per link component, sorted by minimal label.
    pub components: Vec<Vec<Edge>>,
    edge_dirs: HashMap<Edge, EdgeDir>,
}

impl LinkDiagram {
    pub fn new(pd: PdCode, arrows: Option<Vec<bool>>) -> Result<Self, DiagramError> {
        LinkDiagram::new_oriented(pd, arrows, &HashMap::new())
    }

    /// Build with explicit edge directions (given as the incidence each edge
    /// flows into), used when deriving diagrams whose orientation must match
    /// an existing one instead of being re-propagated.
    fn new_oriented(
        pd: PdCode,
        arrows: Option<Vec<bool>>,
        forced: &HashMap<Edge, (usize, u8)>,
    ) -> Result<Self, DiagramError> {
        validate_labels(&pd)?;
        check_planarity(&pd)?;
        let edge_dirs = orient(&pd, forced)?;
        let n = pd.n();
        let signs: Vec<i8> = (0..n).map(|c| crossing_sign(&pd, &edge_dirs, c)).collect();
        let n_plus = signs.iter().filter(|&&s| s > 0).count();
        let n_minus = n - n_plus;
        let arrows = match arrows {
            Some(a) if a.len() == n => a,
            Some(_) => return Err(DiagramError::Parse("arrow list length mismatch".into())),
            None => vec![false; n],
        };
        let components = strand_components(&pd);
        Ok(LinkDiagram { pd, signs, arrows, n_plus, n_minus, components, edge_dirs })
    }

    pub fn from_text(text: &str) -> Result<Self, DiagramError> {
        let (pd, arrows) = parse_pd(text)?;
        LinkDiagram::new(pd, arrows)
    }

    pub fn n(&self) -> usize {
        self.pd.n()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn edge_dir(&self, e: Edge) -> EdgeDir {
        self.edge_dirs[&e]
    }

    /// Same diagram with the arrow at one crossing flipped.
    pub fn with_arrow_flipped(&self, crossing: usize) -> LinkDiagram {
        let mut out = self.clone();
        out.arrows[crossing] = !out.arrows[crossing];
        out
    }

    /// Slot carrying the incoming over-strand: 3 at positive crossings, 1 at
    /// negative ones.
    fn over_in_slot(&self, c: usize) -> u8 {
        if self.signs[c] > 0 {
            3
        } else {
            1
        }
    }

    /// Mirror image: every crossing is switched, which re-roots its rotation
    /// tuple at the old incoming over-strand. Arrows are transported by the
    /// checkerboard rule: rotate anticlockwise over white regions and
    /// clockwise over black ones.
    pub fn mirror(&self) -> LinkDiagram {
        let colors = face_colors(&self.pd);
        let mut crossings = Vec::with_capacity(self.n());
        let mut arrows = Vec::with_capacity(self.n());
        for c in 0..self.n() {
            let o = self.over_in_slot(c) as usize;
            let t = self.pd.crossings[c];
            crossings.push([t[o], t[(o + 1) % 4], t[(o + 2) % 4], t[(o + 3) % 4]]);
            // The 0-arrow at c passes over the faces at corners 1 and 3.
            let ccw = colors[&(c, 1)];
            let flipped = if self.signs[c] > 0 { self.arrows[c] ^ ccw } else { self.arrows[c] ^ !ccw };
            arrows.push(flipped);
        }
        // Orientations carry over verbatim; slots are re-rooted per crossing.
        let forced: HashMap<Edge, (usize, u8)> = self
            .edge_dirs
            .iter()
            .map(|(&e, d)| {
                let (c, s) = d.to;
                let o = self.over_in_slot(c);
                (e, (c, (s + 4 - o) % 4))
            })
            .collect();
        let pd = PdCode::with_free_circles(crossings, self.pd.free_circles);
        let out =
            LinkDiagram::new_oriented(pd, Some(arrows), &forced).expect("mirror of a valid diagram");
        debug_assert!(out.signs.iter().zip(&self.signs).all(|(a, b)| *a == -*b));
        out
    }

    /// Reverse the orientation of one component. Crossings between the chosen
    /// component and the rest change sign; the rotation tuple of a crossing is
    /// re-rooted by two when its under-strand is reversed.
    pub fn reverse_component(&self, comp: usize) -> Result<LinkDiagram, DiagramError> {
        let edges = self.components.get(comp).ok_or(DiagramError::BadComponent(comp))?;
        let in_comp: std::collections::HashSet<Edge> = edges.iter().copied().collect();
        let mut crossings = Vec::with_capacity(self.n());
        let mut arrows = Vec::with_capacity(self.n());
        let mut rerooted = vec![false; self.n()];
        for c in 0..self.n() {
            let t = self.pd.crossings[c];
            if in_comp.contains(&t[0]) {
                crossings.push([t[2], t[3], t[0], t[1]]);
                arrows.push(!self.arrows[c]);
                rerooted[c] = true;
            } else {
                crossings.push(t);
                arrows.push(self.arrows[c]);
            }
        }
        let forced: HashMap<Edge, (usize, u8)> = self
            .edge_dirs
            .iter()
            .map(|(&e, d)| {
                // Reversed edges flow into their old source incidence.
                let (c, s) = if in_comp.contains(&e) { d.from } else { d.to };
                let s = if rerooted[c] { (s + 2) % 4 } else { s };
                (e, (c, s))
            })
            .collect();
        let pd = PdCode::with_free_circles(crossings, self.pd.free_circles);
        LinkDiagram::new_oriented(pd, Some(arrows), &forced)
    }

    /// Linking number of the chosen component with the rest of the diagram.
    pub fn linking_number(&self, comp: usize) -> Result<i64, DiagramError> {
        let edges = self.components.get(comp).ok_or(DiagramError::BadComponent(comp))?;
        let in_comp: std::collections::HashSet<Edge> = edges.iter().copied().collect();
        let mut total = 0i64;
        for c in 0..self.n() {
            let t = self.pd.crossings[c];
            let under = in_comp.contains(&t[0]);
            let over = in_comp.contains(&t[self.over_in_slot(c) as usize]);
            if under != over {
                total += self.signs[c] as i64;
            }
        }
        Ok(total / 2)
    }
}

/// Orientation propagation: slot 0 is incoming and slot 2 outgoing on the
/// under-strand; the over-strand direction is a per-crossing unknown coupled
/// through shared edges. `forced` pins edges to flow into given incidences.
fn orient(
    pd: &PdCode,
    forced_dirs: &HashMap<Edge, (usize, u8)>,
) -> Result<HashMap<Edge, EdgeDir>, DiagramError> {
    let n = pd.n();
    let inc = pd.incidences();
    // p[c] = true when the over-strand enters at slot 3 (positive crossing).
    let mut p: Vec<Option<bool>> = vec![None; n];
    // For the parity union-find on over/over edges.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity: Vec<bool> = vec![false; n]; // relative to parent
    fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (root, par) = find(parent, parity, parent[x]);
        parent[x] = root;
        parity[x] ^= par;
        (root, parity[x])
    }

    // status of an incidence, given p: true = incoming.
    // slot 0 -> in, slot 2 -> out, slot 3 -> in iff p, slot 1 -> in iff !p.
    let mut forced: Vec<(usize, bool)> = Vec::new();
    for (&e, &(c, s)) in forced_dirs {
        match s {
            0 => {}
            2 => return Err(DiagramError::Orientation(e)),
            3 => forced.push((c, true)),
            _ => forced.push((c, false)),
        }
    }
    for (&e, occ) in &inc {
        let (c1, s1) = occ[0];
        let (c2, s2) = occ[1];
        let under1 = s1 % 2 == 0;
        let under2 = s2 % 2 == 0;
        match (under1, under2) {
            (true, true) => {
                // in at slot 0 / out at slot 2 at both ends: must differ.
                if (s1 == 0) == (s2 == 0) {
                    return Err(DiagramError::Orientation(e));
                }
            }
            (true, false) => {
                let e_in_at_1 = s1 == 0;
                // incoming at the under end means outgoing at the over end.
                let in_at_2 = !e_in_at_1;
                // slot 3: in iff p; slot 1: in iff !p.
                let val = if s2 == 3 { in_at_2 } else { !in_at_2 };
                forced.push((c2, val));
            }
            (false, true) => {
                let e_in_at_2 = s2 == 0;
                let in_at_1 = !e_in_at_2;
                let val = if s1 == 3 { in_at_1 } else { !in_at_1 };
                forced.push((c1, val));
            }
            (false, false) => {
                // in1 = (s1==3) == p1 ; in2 = (s2==3) == p2 ; need in1 != in2.
                // p1 xor p2 = 1 xor ((s1==3) xor (s2==3)).
                let rel = !((s1 == 3) ^ (s2 == 3));
                let (r1, q1) = find(&mut parent, &mut parity, c1);
                let (r2, q2) = find(&mut parent, &mut parity, c2);
                if r1 == r2 {
                    if (q1 ^ q2) != rel {
                        return Err(DiagramError::Orientation(e));
                    }
                } else {
                    parent[r1] = r2;
                    parity[r1] = q1 ^ q2 ^ rel;
                }
            }
        }
    }
    for (c, val) in forced {
        let (r, q) = find(&mut parent, &mut parity, c);
        let root_val = val ^ q;
        match p[r] {
            None => p[r] = Some(root_val),
            Some(v) if v == root_val => {}
            Some(_) => return Err(DiagramError::Orientation(pd.crossings[c][0])),
        }
    }
    // Components never passing under anything are not pinned by the PD
    // convention. Prefer the direction under which more labels increase along
    // the strand, the usual sequential-numbering convention.
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..n {
        let (r, _) = find(&mut parent, &mut parity, c);
        classes.entry(r).or_default().push(c);
    }
    for (r, members) in classes {
        if p[r].is_some() {
            continue;
        }
        let mut best = (i64::MIN, true);
        for candidate in [true, false] {
            let mut score = 0i64;
            for &c in &members {
                let (_, q) = find(&mut parent, &mut parity, c);
                let pc = candidate ^ q;
                let (in_slot, out_slot) = if pc { (3, 1) } else { (1, 3) };
                let e_in = pd.crossings[c][in_slot as usize];
                let e_out = pd.crossings[c][out_slot as usize];
                if e_out == e_in + 1 {
                    score += 1;
                }
            }
            if score > best.0 {
                best = (score, candidate);
            }
        }
        p[r] = Some(best.1);
    }
    let pval: Vec<bool> = (0..n)
        .map(|c| {
            let (r, q) = find(&mut parent, &mut parity, c);
            p[r].unwrap_or(true) ^ q
        })
        .collect();

    let mut dirs = HashMap::new();
    for (&e, occ) in &inc {
        let status = |&(c, s): &(usize, u8)| -> bool {
            match s {
                0 => true,
                2 => false,
                3 => pval[c],
                _ => !pval[c],
            }
        };
        let (a, b) = (occ[0], occ[1]);
        match (status(&a), status(&b)) {
            (true, false) => {
                dirs.insert(e, EdgeDir { from: b, to: a });
            }
            (false, true) => {
                dirs.insert(e, EdgeDir { from: a, to: b });
            }
            _ => return Err(DiagramError::Orientation(e)),
        }
    }
    Ok(dirs)
}

/// Sign of a crossing: +1 when the over-strand enters at slot 3 (west), so
/// that rotating the over direction counterclockwise gives the under one.
fn crossing_sign(pd: &PdCode, dirs: &HashMap<Edge, EdgeDir>, c: usize) -> i8 {
    let e3 = pd.crossings[c][3];
    let d = dirs[&e3];
    if d.to == (c, 3) {
        1
    } else {
        -1
    }
}

/// Link components as orbits of edges under strand continuation.
fn strand_components(pd: &PdCode) -> Vec<Vec<Edge>> {
    let inc = pd.incidences();
    let labels: Vec<Edge> = inc.keys().copied().collect();
    let index: HashMap<Edge, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != x {
            let nxt = parent[x];
            parent[x] = r;
            x = nxt;
        }
        r
    }
    for t in &pd.crossings {
        for (a, b) in [(0, 2), (1, 3)] {
            let (ia, ib) = (index[&t[a]], index[&t[b]]);
            let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    for (i, &e) in labels.iter().enumerate() {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(e);
    }
    let mut out: Vec<Vec<Edge>> = comps.into_values().collect();
    out.sort_by_key(|v| v[0]);
    out
}

/// Checkerboard colors of the faces adjacent to each crossing corner.
/// `colors[&(c, s)]` is the color of the face at the corner between slots
/// `s` and `s+1`; `true` plays the role of white.
fn face_colors(pd: &PdCode) -> HashMap<(usize, u8), bool> {
    let faces = trace_faces(pd);
    let nf = faces.iter().copied().max().map_or(0, |m| m + 1);
    // Two faces on opposite sides of an edge get opposite colors; the sides of
    // the edge at slot s are the corners s and s-1 of that crossing.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    let corner_face = |c: usize, s: u8| faces[c * 4 + s as usize];
    for c in 0..pd.n() {
        for s in 0..4u8 {
            let a = corner_face(c, s);
            let b = corner_face(c, (s + 3) % 4);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; nf];
    for start in 0..nf {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(true);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let cf = color[f].unwrap();
            for &g in &adj[f] {
                match color[g] {
                    None => {
                        color[g] = Some(!cf);
                        stack.push(g);
                    }
                    Some(cg) => debug_assert_ne!(cf, cg, "diagram is not checkerboard colorable"),
                }
            }
        }
    }
    let mut out = HashMap::new();
    for c in 0..pd.n() {
        for s in 0..4u8 {
            out.insert((c, s), color[corner_face(c, s)].unwrap());
        }
    }
    out
}

/// Assign a face id to every corner (crossing, slot between s and s+1) by
/// walking the boundary orbits of the rotation system.
fn trace_faces(pd: &PdCode) -> Vec<usize> {
    let n = pd.n();
    let inc = pd.incidences();
    let other = |c: usize, s: u8| -> (usize, u8) {
        let occ = &inc[&pd.crossings[c][s as usize]];
        if occ[0] == (c, s) {
            occ[1]
        } else {
            occ[0]
        }
    };
    let mut face = vec![usize::MAX; n * 4];
    let mut next_id = 0;
    for c0 in 0..n {
        for s0 in 0..4u8 {
            if face[c0 * 4 + s0 as usize] != usize::MAX {
                continue;
            }
            // Walk: from corner (c, s) leave along the edge at slot s+1 and
            // arrive at (c', s'); the next corner is (c', s').
            let (mut c, mut s) = (c0, s0);
            loop {
                if face[c * 4 + s as usize] != usize::MAX {
                    break;
                }
                face[c * 4 + s as usize] = next_id;
                let (c2, s2) = other(c, (s + 1) % 4);
                c = c2;
                s = s2;
            }
            next_id += 1;
        }
    }
    face
}

fn check_planarity(pd: &PdCode) -> Result<(), DiagramError> {
    let n = pd.n();
    if n == 0 {
        return Ok(());
    }
    // Connected pieces of the underlying 4-valent graph.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let inc = pd.incidences();
    for occ in inc.values() {
        let (a, b) = (occ[0].0, occ[1].0);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let pieces: std::collections::HashSet<usize> = (0..n).map(|c| find(&mut parent, c)).collect();
    let faces = trace_faces(pd);
    let nf = faces.iter().max().unwrap() + 1;
    // Euler characteristic 2 per spherical piece: with V = n and E = 2n the
    // face count must come out as n + 2·pieces.
    if nf != n + 2 * pieces.len() {
        return Err(DiagramError::NonPlanar);
    }
    Ok(())
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pd.to_knottheory())?;
        if self.pd.free_circles > 0 {
            write!(f, " + {} free circles", self.pd.free_circles)?;
        }
        Ok(())
    }
}
