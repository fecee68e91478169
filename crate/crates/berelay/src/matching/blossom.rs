//! Exact maximum weight matching on general graphs.
//!
//! Primal-dual blossom algorithm in the classic O(V³) formulation: grow
//! alternating trees from free vertices, shrink odd cycles (blossoms) into
//! pseudo-vertices, adjust dual variables until an augmenting path of tight
//! edges appears, repeat for up to V stages. Works directly on real-valued
//! weights; tightness checks use a tolerance proportional to the largest
//! weight so that dual updates that should cancel exactly are recognized as
//! tight despite rounding.
//!
//! Indexing follows the usual array formulation: vertices are `0..n`,
//! blossoms `n..2n`, edge endpoints are `2k` and `2k+1` for edge `k`, and
//! `p ^ 1` flips an endpoint to the other side of its edge.

use super::{Matching, WeightedGraph};

const UNSET: isize = -1;
const LABEL_FREE: u8 = 0;
const LABEL_S: u8 = 1;
const LABEL_T: u8 = 2;
const SCAN_MARK: u8 = 4;

/// Maximum weight matching of the graph, exact up to floating-point
/// tolerance on tie decisions. Deterministic: vertices are processed in
/// sorted id order and edges in canonical `(u, v)` order.
pub fn blossom_mwm(graph: &WeightedGraph) -> Matching {
    let verts: Vec<usize> = graph.vertices().iter().copied().collect();
    if verts.is_empty() || graph.edges().is_empty() {
        return Matching::from_edges(graph, Vec::new());
    }
    let dense: std::collections::BTreeMap<usize, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges: Vec<(usize, usize, f64)> = graph
        .edges()
        .iter()
        .map(|e| (dense[&e.u], dense[&e.v], e.weight))
        .collect();
    edges.sort_by_key(|e| (e.0, e.1));

    let mate = Solver::new(verts.len(), &edges).run();
    let mut pairs = Vec::new();
    for (v, &m) in mate.iter().enumerate() {
        if m >= 0 && v < m as usize {
            pairs.push((verts[v], verts[m as usize]));
        }
    }
    Matching::from_edges(graph, pairs)
}

struct Solver<'a> {
    n: usize,
    edges: &'a [(usize, usize, f64)],
    eps: f64,
    /// `endpoint[p]` is the vertex at endpoint `p`.
    endpoint: Vec<usize>,
    /// Endpoints pointing *away* from each vertex.
    neighbend: Vec<Vec<usize>>,
    /// Matched endpoint of each vertex, or UNSET.
    mate: Vec<isize>,
    label: Vec<u8>,
    /// Endpoint through which a labeled vertex/blossom was reached.
    labelend: Vec<isize>,
    /// Innermost blossom containing each vertex.
    inblossom: Vec<usize>,
    blossomparent: Vec<isize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<isize>,
    blossomendps: Vec<Vec<usize>>,
    /// Least-slack edge candidates for dual updates.
    bestedge: Vec<isize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<f64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(n: usize, edges: &'a [(usize, usize, f64)]) -> Self {
        let m = edges.len();
        let maxweight = edges.iter().map(|e| e.2).fold(0.0, f64::max);
        let endpoint: Vec<usize> = (0..2 * m)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; n];
        dualvar.extend(std::iter::repeat_n(0.0, n));
        Solver {
            n,
            edges,
            eps: 1e-12 * (1.0 + maxweight),
            endpoint,
            neighbend,
            mate: vec![UNSET; n],
            label: vec![LABEL_FREE; 2 * n],
            labelend: vec![UNSET; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![UNSET; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase: (0..n as isize).chain(std::iter::repeat_n(UNSET, n)).collect(),
            blossomendps: vec![Vec::new(); 2 * n],
            bestedge: vec![UNSET; 2 * n],
            blossombestedges: vec![None; 2 * n],
            unusedblossoms: (n..2 * n).collect(),
            dualvar,
            allowedge: vec![false; m],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> f64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2.0 * wt
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
        } else {
            for &c in &self.blossomchilds[b] {
                self.blossom_leaves(c, out);
            }
        }
    }

    fn assign_label(&mut self, w: usize, t: u8, p: isize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = UNSET;
        self.bestedge[b] = UNSET;
        if t == LABEL_S {
            let mut leaves = Vec::new();
            self.blossom_leaves(b, &mut leaves);
            self.queue.extend(leaves);
        } else if t == LABEL_T {
            let base = self.blossombase[b] as usize;
            let mb = self.mate[base];
            debug_assert!(mb >= 0, "T-labeled blossom must have a matched base");
            self.assign_label(self.endpoint[mb as usize], LABEL_S, mb ^ 1);
        }
    }

    /// Trace back from both ends of a tight S-S edge; returns the common
    /// ancestor base vertex, or UNSET if the paths reach different roots
    /// (then the edge closes an augmenting path instead of a blossom).
    fn scan_blossom(&mut self, v: usize, w: usize) -> isize {
        let mut path = Vec::new();
        let mut base = UNSET;
        let mut v = v as isize;
        let mut w = w as isize;
        while v != UNSET || w != UNSET {
            if v != UNSET {
                let b = self.inblossom[v as usize];
                if self.label[b] & SCAN_MARK != 0 {
                    base = self.blossombase[b];
                    break;
                }
                debug_assert_eq!(self.label[b], LABEL_S);
                path.push(b);
                self.label[b] |= SCAN_MARK;
                let bb = self.blossombase[b] as usize;
                if self.mate[bb] == UNSET {
                    v = UNSET;
                } else {
                    let t = self.endpoint[self.mate[bb] as usize];
                    let bt = self.inblossom[t];
                    debug_assert_eq!(self.label[bt], LABEL_T);
                    debug_assert!(self.labelend[bt] >= 0);
                    v = self.endpoint[self.labelend[bt] as usize] as isize;
                }
            }
            if w != UNSET {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Shrink the odd cycle through edge `k` and base vertex `base` into a
    /// fresh blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (v, w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base as isize;
        self.blossomparent[b] = UNSET;
        self.blossomparent[bb] = b as isize;

        let mut path = Vec::new();
        let mut endps = Vec::new();
        let mut vv = v;
        while bv != bb {
            self.blossomparent[bv] = b as isize;
            path.push(bv);
            endps.push(self.labelend[bv] as usize);
            debug_assert!(
                self.label[bv] == LABEL_T
                    || (self.label[bv] == LABEL_S
                        && self.labelend[bv] == self.mate[self.blossombase[bv] as usize])
            );
            debug_assert!(self.labelend[bv] >= 0);
            vv = self.endpoint[self.labelend[bv] as usize];
            bv = self.inblossom[vv];
        }
        let _ = vv;
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        let mut ww = w;
        while bw != bb {
            self.blossomparent[bw] = b as isize;
            path.push(bw);
            endps.push(self.labelend[bw] as usize ^ 1);
            debug_assert!(
                self.label[bw] == LABEL_T
                    || (self.label[bw] == LABEL_S
                        && self.labelend[bw] == self.mate[self.blossombase[bw] as usize])
            );
            debug_assert!(self.labelend[bw] >= 0);
            ww = self.endpoint[self.labelend[bw] as usize];
            bw = self.inblossom[ww];
        }
        let _ = ww;

        debug_assert_eq!(self.label[bb], LABEL_S);
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        self.label[b] = LABEL_S;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0.0;
        let mut leaves = Vec::new();
        self.blossom_leaves(b, &mut leaves);
        for &lv in &leaves {
            if self.label[self.inblossom[lv]] == LABEL_T {
                self.queue.push(lv);
            }
            self.inblossom[lv] = b;
        }

        // Merge least-slack edge lists of the constituent blossoms.
        let mut bestedgeto = vec![UNSET; 2 * self.n];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(list) => vec![list],
                None => {
                    let mut per_leaf = Vec::new();
                    let mut lvs = Vec::new();
                    self.blossom_leaves(bv, &mut lvs);
                    for lv in lvs {
                        per_leaf.push(self.neighbend[lv].iter().map(|&p| p / 2).collect());
                    }
                    per_leaf
                }
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && (bestedgeto[bj] == UNSET
                            || self.slack(k) < self.slack(bestedgeto[bj] as usize))
                    {
                        bestedgeto[bj] = k as isize;
                    }
                }
            }
            self.bestedge[bv] = UNSET;
        }
        let kept: Vec<usize> = bestedgeto
            .into_iter()
            .filter(|&k| k != UNSET)
            .map(|k| k as usize)
            .collect();
        self.bestedge[b] = UNSET;
        for &k in &kept {
            if self.bestedge[b] == UNSET || self.slack(k) < self.slack(self.bestedge[b] as usize) {
                self.bestedge[b] = k as isize;
            }
        }
        self.blossombestedges[b] = Some(kept);
    }

    /// Undo a blossom, relabeling its children. During a stage (`endstage`
    /// false) this happens when the blossom's dual hits zero while
    /// T-labeled; at stage end every S-blossom with zero dual is unfolded.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = UNSET;
            if s < self.n {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s].abs() <= self.eps {
                self.expand_blossom(s, endstage);
            } else {
                let mut lvs = Vec::new();
                self.blossom_leaves(s, &mut lvs);
                for lv in lvs {
                    self.inblossom[lv] = s;
                }
            }
        }

        if !endstage && self.label[b] == LABEL_T {
            // Relabel the even-length side of the cycle between the entry
            // child and the base; alternate children get T labels, and the
            // edges between them become allowed.
            let entrychild = self.inblossom[self.endpoint[(self.labelend[b] ^ 1) as usize]];
            let idx = childs.iter().position(|&c| c == entrychild).unwrap();
            let len = childs.len() as isize;
            let (mut j, jstep, endptrick): (isize, isize, usize) = if idx % 2 == 1 {
                (idx as isize - len, 1, 0)
            } else {
                (idx as isize, -1, 1)
            };
            let wrap = |j: isize| -> usize {
                (if j < 0 { j + len } else { j }) as usize
            };
            let mut p = self.labelend[b] as usize;
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = LABEL_FREE;
                let q = self.blossomendps[b][wrap(j - endptrick as isize)] ^ endptrick;
                self.label[self.endpoint[q ^ 1]] = LABEL_FREE;
                self.assign_label(self.endpoint[p ^ 1], LABEL_T, p as isize);
                self.allowedge[q / 2] = true;
                j += jstep;
                p = self.blossomendps[b][wrap(j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[wrap(j)];
            self.label[self.endpoint[p ^ 1]] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.labelend[self.endpoint[p ^ 1]] = p as isize;
            self.labelend[bv] = p as isize;
            self.bestedge[bv] = UNSET;
            // The other side keeps its labels; unlabeled children whose
            // vertices carry stale deep labels get relabeled from scratch.
            j += jstep;
            while childs[wrap(j)] != entrychild {
                let bv = childs[wrap(j)];
                if self.label[bv] == LABEL_S {
                    j += jstep;
                    continue;
                }
                let mut lvs = Vec::new();
                self.blossom_leaves(bv, &mut lvs);
                let mut deep = None;
                for lv in lvs {
                    if self.label[lv] != LABEL_FREE {
                        deep = Some(lv);
                        break;
                    }
                }
                if let Some(lv) = deep {
                    debug_assert_eq!(self.label[lv], LABEL_T);
                    debug_assert_eq!(self.inblossom[lv], bv);
                    self.label[lv] = LABEL_FREE;
                    let base = self.blossombase[bv] as usize;
                    self.label[self.endpoint[self.mate[base] as usize]] = LABEL_FREE;
                    let le = self.labelend[lv];
                    self.assign_label(lv, LABEL_T, le);
                }
                j += jstep;
            }
        }

        self.label[b] = LABEL_FREE;
        self.labelend[b] = UNSET;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = UNSET;
        self.blossombestedges[b] = None;
        self.bestedge[b] = UNSET;
        self.unusedblossoms.push(b);
    }

    /// Swap matched and unmatched edges along the path inside blossom `b`
    /// from vertex `v` to the base, then rotate the child list so `v`'s
    /// subblossom becomes the base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b as isize {
            t = self.blossomparent[t] as usize;
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let len = self.blossomchilds[b].len() as isize;
        let (mut j, jstep, endptrick): (isize, isize, usize) = if i % 2 == 1 {
            (i as isize - len, 1, 0)
        } else {
            (i as isize, -1, 1)
        };
        let wrap = |j: isize| -> usize {
            (if j < 0 { j + len } else { j }) as usize
        };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][wrap(j)];
            let p = self.blossomendps[b][wrap(j - endptrick as isize)] ^ endptrick;
            if t >= self.n {
                let ep = self.endpoint[p];
                self.augment_blossom(t, ep);
            }
            j += jstep;
            let t = self.blossomchilds[b][wrap(j)];
            if t >= self.n {
                let ep = self.endpoint[p ^ 1];
                self.augment_blossom(t, ep);
            }
            self.mate[self.endpoint[p]] = p as isize ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p as isize;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v as isize);
    }

    /// Augment along the path through tight edge `k`, flipping matched
    /// edges back to both tree roots.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = s0;
            let mut p = p0;
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], LABEL_S);
                debug_assert_eq!(
                    self.labelend[bs],
                    self.mate[self.blossombase[bs] as usize]
                );
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p as isize;
                if self.labelend[bs] == UNSET {
                    break;
                }
                let t = self.endpoint[self.labelend[bs] as usize];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], LABEL_T);
                debug_assert!(self.labelend[bt] >= 0);
                s = self.endpoint[self.labelend[bt] as usize];
                let j = self.endpoint[(self.labelend[bt] ^ 1) as usize];
                debug_assert_eq!(self.blossombase[bt] as usize, t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = (self.labelend[bt] ^ 1) as usize;
            }
        }
    }

    fn run(mut self) -> Vec<isize> {
        for _stage in 0..self.n {
            self.label.fill(LABEL_FREE);
            self.bestedge.fill(UNSET);
            for be in &mut self.blossombestedges[self.n..] {
                *be = None;
            }
            self.allowedge.fill(false);
            self.queue.clear();
            for v in 0..self.n {
                if self.mate[v] == UNSET && self.label[self.inblossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, UNSET);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.inblossom[v]], LABEL_S);
                    for pi in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][pi];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0.0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= self.eps {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            let bw = self.inblossom[w];
                            if self.label[bw] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, (p ^ 1) as isize);
                            } else if self.label[bw] == LABEL_S {
                                let base = self.scan_blossom(v, w);
                                if base >= 0 {
                                    self.add_blossom(base as usize, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == LABEL_FREE {
                                debug_assert_eq!(self.label[bw], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.labelend[w] = (p ^ 1) as isize;
                            }
                        } else if self.label[self.inblossom[w]] == LABEL_S {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == UNSET
                                || kslack < self.slack(self.bestedge[b] as usize)
                            {
                                self.bestedge[b] = k as isize;
                            }
                        } else if self.label[w] == LABEL_FREE
                            && (self.bestedge[w] == UNSET
                                || kslack < self.slack(self.bestedge[w] as usize))
                        {
                            self.bestedge[w] = k as isize;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path on tight edges; adjust duals by the
                // least amount that creates new tight structure.
                let mut deltatype = 1;
                let mut delta = self.dualvar[..self.n]
                    .iter()
                    .fold(f64::INFINITY, |a, &b| a.min(b))
                    .max(0.0);
                let mut deltaedge = UNSET;
                let mut deltablossom = UNSET;
                for v in 0..self.n {
                    if self.label[self.inblossom[v]] == LABEL_FREE && self.bestedge[v] != UNSET {
                        let d = self.slack(self.bestedge[v] as usize);
                        if d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.n {
                    if self.blossomparent[b] == UNSET
                        && self.label[b] == LABEL_S
                        && self.bestedge[b] != UNSET
                    {
                        let d = self.slack(self.bestedge[b] as usize) / 2.0;
                        if d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossombase[b] >= 0
                        && self.blossomparent[b] == UNSET
                        && self.label[b] == LABEL_T
                        && self.dualvar[b] < delta
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b as isize;
                    }
                }

                for v in 0..self.n {
                    match self.label[self.inblossom[v]] {
                        LABEL_S => self.dualvar[v] -= delta,
                        LABEL_T => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossombase[b] >= 0 && self.blossomparent[b] == UNSET {
                        match self.label[b] {
                            LABEL_S => self.dualvar[b] += delta,
                            LABEL_T => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        let k = deltaedge as usize;
                        self.allowedge[k] = true;
                        let (i, j, _) = self.edges[k];
                        let i = if self.label[self.inblossom[i]] == LABEL_FREE {
                            j
                        } else {
                            i
                        };
                        debug_assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        let k = deltaedge as usize;
                        self.allowedge[k] = true;
                        let (i, _, _) = self.edges[k];
                        debug_assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    _ => {
                        self.expand_blossom(deltablossom as usize, false);
                    }
                }
            }

            if !augmented {
                break;
            }
            for b in self.n..2 * self.n {
                if self.blossomparent[b] == UNSET
                    && self.blossombase[b] >= 0
                    && self.label[b] == LABEL_S
                    && self.dualvar[b].abs() <= self.eps
                {
                    self.expand_blossom(b, true);
                }
            }
        }

        let mut mate_vertex = vec![UNSET; self.n];
        for v in 0..self.n {
            if self.mate[v] >= 0 {
                mate_vertex[v] = self.endpoint[self.mate[v] as usize] as isize;
            }
        }
        for v in 0..self.n {
            debug_assert!(
                mate_vertex[v] == UNSET || mate_vertex[mate_vertex[v] as usize] == v as isize
            );
        }
        mate_vertex
    }
}
