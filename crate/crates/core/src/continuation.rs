//! Predictor–corrector tracking of the `d` preimages of a circle, and assembly of
//! the tracked arcs into closed curves.
//!
//! A [`Fiber`] describes the equation `F(z) = w(t)` for `w` running once around a
//! circle. Between consecutive *splits* (phases where a critical value sits on
//! the circle) the preimages are simple and are tracked by first-order
//! prediction along `dz/dt` followed by a hinted re-solve. Arc ends that run into
//! a critical point are glued to it; all other ends pass straight through to the
//! next arc. Closed curves are Euler circuits of the resulting junction graph.

use std::f64::consts::TAU;
use std::fmt::Debug;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::match_indices;

pub(crate) trait Fiber {
    type Point: Copy + Debug;

    fn degree(&self) -> usize;

    /// All preimages at phase `t`. With hints the output is matched to them;
    /// without, it is in a canonical order.
    fn solve(&self, t: f64, hints: Option<&[Self::Point]>) -> Result<Vec<Self::Point>>;

    /// Derivative of the preimage through `p` with respect to `t`, in `p`'s chart.
    fn velocity(&self, t: f64, p: &Self::Point) -> Complex64;

    /// Displace `p` by `delta` inside its chart.
    fn shift(&self, p: &Self::Point, delta: Complex64) -> Self::Point;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Metric length of the chart displacement `v` attached at `p`.
    fn metric_norm(&self, p: &Self::Point, v: Complex64) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepControl {
    pub phase_step_max: f64,
    pub spatial_step_max: f64,
    /// Largest accepted predictor/corrector discrepancy.
    pub max_deviation: f64,
    pub min_phase_step: f64,
}

/// Phase offset at which arcs stop short of a split.
pub(crate) const SPLIT_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Vertex<P> {
    pub point: P,
    pub t: f64,
    pub branch: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct GlueNode<P> {
    pub point: P,
    /// Number of preimages meeting here (local degree).
    pub branches: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Split<P> {
    pub t: f64,
    pub nodes: Vec<GlueNode<P>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Traced<P> {
    pub components: Vec<Vec<Vertex<P>>>,
    pub touch_points: Vec<P>,
    /// Boundary monodromy, only available when no split was needed.
    pub monodromy: Option<Vec<usize>>,
}

/// One `(t, point)` sequence per branch.
pub(crate) type Paths<P> = Vec<Vec<(f64, P)>>;

/// Track all branches from `t0` to `t1` (either direction), starting at `start`.
/// Returns one `(t, point)` path per branch, both endpoints included.
pub(crate) fn track<F: Fiber>(
    fiber: &F,
    t0: f64,
    t1: f64,
    start: Vec<F::Point>,
    ctl: &StepControl,
) -> Result<Paths<F::Point>> {
    let d = start.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut z = start;
    let mut paths: Vec<Vec<(f64, F::Point)>> = z.iter().map(|p| vec![(t, *p)]).collect();
    let mut h_suggest = ctl.phase_step_max;

    while (t1 - t) * dir > 0.0 {
        let remaining = (t1 - t).abs();
        let vel: Vec<Complex64> = z.iter().map(|p| fiber.velocity(t, p)).collect();
        let mut sep = vec![f64::INFINITY; d];
        for i in 0..d {
            for j in i + 1..d {
                let s = fiber.distance(&z[i], &z[j]);
                sep[i] = sep[i].min(s);
                sep[j] = sep[j].min(s);
            }
        }
        let mut h = ctl.phase_step_max.min(remaining).min(h_suggest);
        for k in 0..d {
            let speed = fiber.metric_norm(&z[k], vel[k]);
            if !speed.is_finite() {
                return Err(Error::Continuation {
                    theta: t,
                    reason: "preimage reached a critical point".into(),
                });
            }
            if speed > 0.0 {
                h = h.min(ctl.spatial_step_max / speed).min(0.25 * sep[k] / speed);
            }
        }

        loop {
            if h < ctl.min_phase_step {
                return Err(Error::Continuation {
                    theta: t,
                    reason: "phase step underflow; branches could not be separated".into(),
                });
            }
            let last = h >= remaining * (1.0 - 1e-12);
            let t_new = if last { t1 } else { t + dir * h };
            let step = t_new - t;
            let predicted: Vec<F::Point> = z
                .iter()
                .zip(&vel)
                .map(|(p, v)| fiber.shift(p, v * step))
                .collect();
            let corrected = match fiber.solve(t_new, Some(&predicted)) {
                Ok(c) => c,
                Err(_) => {
                    h *= 0.5;
                    continue;
                }
            };
            let mut deviation: f64 = 0.0;
            let mut swapped = false;
            for k in 0..d {
                let dev = fiber.distance(&corrected[k], &predicted[k]);
                deviation = deviation.max(dev);
                if dev > 0.3 * sep[k] {
                    swapped = true;
                }
            }
            if swapped || deviation.is_nan() || deviation > ctl.max_deviation {
                let shrink = if swapped || !deviation.is_finite() {
                    0.5
                } else {
                    (0.8 * (ctl.max_deviation / deviation).sqrt()).clamp(0.2, 0.5)
                };
                h *= shrink;
                continue;
            }
            t = t_new;
            z = corrected;
            for (path, p) in paths.iter_mut().zip(&z) {
                path.push((t, *p));
            }
            let grow = if deviation > 0.0 {
                (0.9 * (ctl.max_deviation / deviation).sqrt()).min(2.0)
            } else {
                2.0
            };
            h_suggest = (h * grow).max(ctl.min_phase_step * 4.0);
            break;
        }
    }
    Ok(paths)
}

/// Permutation induced by continuing the preimages at `t0` once around the circle.
/// Entry `k` is the index of the starting preimage where branch `k` ends.
pub(crate) fn monodromy<F: Fiber>(fiber: &F, t0: f64, reverse: bool, ctl: &StepControl) -> Result<Vec<usize>> {
    let start = fiber.solve(t0, None)?;
    let t1 = if reverse { t0 - TAU } else { t0 + TAU };
    let paths = track(fiber, t0, t1, start.clone(), ctl)?;
    let ends: Vec<F::Point> = paths.iter().map(|p| p.last().expect("nonempty").1).collect();
    Ok(match_indices(ends.len(), start.len(), |i, j| fiber.distance(&ends[i], &start[j])))
}

fn normalize_phase(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// One branch piece of one arc.
struct Piece<P> {
    vertices: Vec<Vertex<P>>,
    tail: usize,
    head: usize,
}

#[derive(Clone, Copy)]
enum Junction {
    /// Ends of arcs flow straight into starts; no extra vertex.
    Pass { duplicate: bool },
    /// A critical point shared by several branches.
    Glue { split: usize, node: usize },
}

/// Trace the full closed preimage of the circle.
///
/// `splits` must be sorted by phase in `[base_t, base_t + 2 pi)` and separated by
/// more than `2 * SPLIT_GAP`. With no splits the circle is tracked once from
/// `base_t` and the monodromy is reported.
pub(crate) fn trace_closed<F: Fiber>(
    fiber: &F,
    splits: &[Split<F::Point>],
    base_t: f64,
    reverse: bool,
    glue_radius: f64,
    ctl: &StepControl,
) -> Result<Traced<F::Point>> {
    let d = fiber.degree();
    let mut pieces: Vec<Piece<F::Point>> = Vec::new();
    let mut junctions: Vec<Junction> = Vec::new();
    let mut touch_points: Vec<F::Point> = Vec::new();
    let mut monodromy_perm = None;

    if splits.is_empty() {
        let start = fiber.solve(base_t, None)?;
        let t1 = if reverse { base_t - TAU } else { base_t + TAU };
        let paths = track(fiber, base_t, t1, start.clone(), ctl)?;
        let ends: Vec<F::Point> = paths.iter().map(|p| p.last().expect("nonempty").1).collect();
        let sigma = match_indices(d, d, |i, j| fiber.distance(&ends[i], &start[j]));
        // junction k sits at the start of branch k
        for _ in 0..d {
            junctions.push(Junction::Pass { duplicate: true });
        }
        for (k, path) in paths.into_iter().enumerate() {
            let vertices = path
                .into_iter()
                .map(|(t, point)| Vertex {
                    point,
                    t: normalize_phase(t),
                    branch: k,
                })
                .collect();
            pieces.push(Piece {
                vertices,
                tail: k,
                head: sigma[k],
            });
        }
        monodromy_perm = Some(sigma);
    } else {
        let m = splits.len();
        // arc i runs from split i to split i+1
        let mut arc_pieces: Vec<Vec<usize>> = Vec::with_capacity(m);
        for i in 0..m {
            let a = splits[i].t + SPLIT_GAP;
            let b = if i + 1 < m { splits[i + 1].t } else { splits[0].t + TAU } - SPLIT_GAP;
            let mid = 0.5 * (a + b);
            let start = fiber.solve(mid, None)?;
            let forward = track(fiber, mid, b, start.clone(), ctl)?;
            let backward = track(fiber, mid, a, start, ctl)?;
            let mut ids = Vec::with_capacity(d);
            for (k, (fw, bw)) in forward.into_iter().zip(backward).enumerate() {
                let mut path: Vec<(f64, F::Point)> = bw.into_iter().rev().collect();
                path.extend(fw.into_iter().skip(1));
                if reverse {
                    path.reverse();
                }
                let vertices = path
                    .into_iter()
                    .map(|(t, point)| Vertex {
                        point,
                        t: normalize_phase(t),
                        branch: k,
                    })
                    .collect();
                ids.push(pieces.len());
                pieces.push(Piece {
                    vertices,
                    tail: usize::MAX,
                    head: usize::MAX,
                });
            }
            arc_pieces.push(ids);
        }

        for (j, split) in splits.iter().enumerate() {
            // arcs meeting at split j: the one before (ending there) and the one after
            let before = &arc_pieces[(j + m - 1) % m];
            let after = &arc_pieces[j];
            let (incoming, outgoing) = if reverse { (after, before) } else { (before, after) };
            let in_pts: Vec<F::Point> = incoming.iter().map(|&e| end_point(&pieces[e])).collect();
            let out_pts: Vec<F::Point> = outgoing.iter().map(|&e| pieces[e].vertices[0].point).collect();

            let in_glue = assign_to_nodes(fiber, &split.nodes, &in_pts);
            let out_glue = assign_to_nodes(fiber, &split.nodes, &out_pts);
            let mut ids = Vec::with_capacity(split.nodes.len());
            for (n, node) in split.nodes.iter().enumerate() {
                ids.push(junctions.len());
                junctions.push(Junction::Glue { split: j, node: n });
                touch_points.push(node.point);
            }
            for (slot, glue) in in_glue.iter().enumerate() {
                if let Some(n) = glue {
                    let dist = fiber.distance(&in_pts[slot], &split.nodes[*n].point);
                    if dist > glue_radius {
                        return Err(Error::Continuation {
                            theta: split.t,
                            reason: format!("arc end {dist:.3e} away from its critical point"),
                        });
                    }
                    pieces[incoming[slot]].head = ids[*n];
                }
            }
            for (slot, glue) in out_glue.iter().enumerate() {
                if let Some(n) = glue {
                    pieces[outgoing[slot]].tail = ids[*n];
                }
            }
            let free_in: Vec<usize> = (0..d).filter(|&s| in_glue[s].is_none()).collect();
            let free_out: Vec<usize> = (0..d).filter(|&s| out_glue[s].is_none()).collect();
            if free_in.len() != free_out.len() {
                return Err(Error::Continuation {
                    theta: split.t,
                    reason: "unbalanced branch count at critical phase".into(),
                });
            }
            let pairing = match_indices(free_in.len(), free_out.len(), |a, b| {
                fiber.distance(&in_pts[free_in[a]], &out_pts[free_out[b]])
            });
            for (a, b) in pairing.into_iter().enumerate() {
                let id = junctions.len();
                junctions.push(Junction::Pass { duplicate: false });
                pieces[incoming[free_in[a]]].head = id;
                pieces[outgoing[free_out[b]]].tail = id;
            }
        }
    }

    let components = euler_components(&pieces, &junctions, splits);
    Ok(Traced {
        components,
        touch_points,
        monodromy: monodromy_perm,
    })
}

fn end_point<P: Copy>(piece: &Piece<P>) -> P {
    piece.vertices.last().expect("nonempty piece").point
}

/// For each point, the node it is glued to (if any). Each node takes its
/// `branches` nearest points, assigned greedily by distance.
fn assign_to_nodes<F: Fiber>(fiber: &F, nodes: &[GlueNode<F::Point>], pts: &[F::Point]) -> Vec<Option<usize>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (n, node) in nodes.iter().enumerate() {
        for (s, p) in pts.iter().enumerate() {
            pairs.push((fiber.distance(&node.point, p), n, s));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut need: Vec<usize> = nodes.iter().map(|n| n.branches).collect();
    let mut out = vec![None; pts.len()];
    for (_, n, s) in pairs {
        if need[n] > 0 && out[s].is_none() {
            out[s] = Some(n);
            need[n] -= 1;
        }
    }
    out
}

/// Euler circuits over the junction graph, one per connected component.
fn euler_components<P: Copy>(pieces: &[Piece<P>], junctions: &[Junction], splits: &[Split<P>]) -> Vec<Vec<Vertex<P>>> {
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); junctions.len()];
    for (e, piece) in pieces.iter().enumerate() {
        out_edges[piece.tail].push(e);
    }
    let mut next_out = vec![0usize; junctions.len()];
    let mut used = vec![false; pieces.len()];
    let mut components = Vec::new();

    for first in 0..pieces.len() {
        if used[first] {
            continue;
        }
        let mut node_stack = vec![pieces[first].tail];
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut circuit: Vec<usize> = Vec::new();
        while let Some(&v) = node_stack.last() {
            let mut advanced = false;
            while next_out[v] < out_edges[v].len() {
                let e = out_edges[v][next_out[v]];
                next_out[v] += 1;
                if !used[e] {
                    used[e] = true;
                    node_stack.push(pieces[e].head);
                    edge_stack.push(e);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                node_stack.pop();
                if let Some(e) = edge_stack.pop() {
                    circuit.push(e);
                }
            }
        }
        circuit.reverse();

        let mut polyline: Vec<Vertex<P>> = Vec::new();
        for &e in &circuit {
            let piece = &pieces[e];
            match junctions[piece.head] {
                Junction::Pass { duplicate: true } => {
                    polyline.extend_from_slice(&piece.vertices[..piece.vertices.len() - 1]);
                }
                Junction::Pass { duplicate: false } => polyline.extend_from_slice(&piece.vertices),
                Junction::Glue { split, node } => {
                    polyline.extend_from_slice(&piece.vertices);
                    let branch = piece.vertices.last().map_or(0, |v| v.branch);
                    polyline.push(Vertex {
                        point: splits[split].nodes[node].point,
                        t: normalize_phase(splits[split].t),
                        branch,
                    });
                }
            }
        }
        components.push(polyline);
    }
    components
}
