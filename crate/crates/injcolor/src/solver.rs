//! End-to-end coloring pipeline.
//!
//! The graph is split into connected components. Components of maximum
//! degree at most 2 are colored exactly through their squares. Every other
//! component is peeled: each level deletes a bounded configuration chosen
//! by the current maximum degree or, in the degree-4/5 regimes, cuts out
//! the two-neighborhood of a vertex that the auxiliary-graph audit marks as
//! deficient. Colorings are then extended back up the chain level by level
//! and the final assignment is verified before it is returned.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::density::mad_exact;
use crate::graph::{neighboring_graph, verify_injective, Coloring, Graph};
use crate::listcolor::{chi_exact, ChiOutcome};
use crate::rational::{ratio, Rational};
use crate::reduce::{
    build_aux, color_via_k, component_surplus, extend, peel, plan_k_subgraph, two_neighborhood,
    Case, KSubgraphPlan, ReductionStep,
};

/// Largest remainder the force mode will hand to the exact solver when the
/// reduction machinery finds nothing to delete.
const FORCE_EXACT_LIMIT: usize = 24;

/// How the pipeline reacts to inputs outside its guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Reject any component whose average-degree hypothesis fails.
    Strict,
    /// Skip the density checks; where the reduction stalls, color small
    /// remainders exactly, growing the palette past the budget if needed.
    Force,
}

/// One entry of a reduction trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepSummary {
    /// A bounded configuration was deleted and later recolored by a list
    /// argument on its square neighborhoods.
    Config { description: String, removed: usize },
    /// The closed two-neighborhood of a deficient vertex was deleted and
    /// later recolored through the auxiliary cycle argument.
    KSubgraph { anchor: usize, removed: usize },
    /// A remainder was colored exactly instead of being peeled further.
    ExactBase { vertices: usize },
}

/// What the pipeline did and what it cost.
#[derive(Debug, Clone)]
pub struct Report {
    /// Maximum average degree of the whole input, when it has vertices.
    pub mad: Option<Rational>,
    /// Number of colors the returned coloring draws from.
    pub palette: u32,
    /// Largest color value actually assigned.
    pub colors_used: u32,
    /// Deletions in the order they were performed.
    pub steps: Vec<StepSummary>,
    pub runtime: Duration,
}

/// Failure modes of the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// A component is too dense for its degree regime.
    #[error("component has maximum average degree {mad}, needs strictly below {bound}")]
    HypothesisViolated { mad: Rational, bound: Rational },
    /// The reduction ran out of moves (or an extension failed, which would
    /// be a bug rather than a property of the input).
    #[error("reduction stalled: {detail}")]
    Stalled { detail: String },
}

fn stall(detail: impl Into<String>) -> SolveError {
    SolveError::Stalled {
        detail: detail.into(),
    }
}

/// Picks the reduction machinery for one peel level.
///
/// The component's overall maximum degree fixes the budget, and with it the
/// extension arguments that are safe: a degree-3 component has only five
/// colors to work with, so it must stick to the low-degree configurations
/// even though its remainders would also satisfy the degree-4 shapes.
/// Denser regimes switch machinery as peeling lowers the maximum degree.
/// `None` means the remainder should be colored exactly instead.
fn level_case(component_delta: usize, current_delta: usize) -> Option<Case> {
    if current_delta <= 2 {
        return None;
    }
    if component_delta <= 3 {
        return Some(Case::Three);
    }
    Some(match current_delta {
        3 | 4 => Case::Four,
        5 => Case::Five,
        d => Case::High(d),
    })
}

/// When no bounded configuration remains in a degree-4/5 regime, finds an
/// auxiliary component in deficit and cuts out the closed two-neighborhood
/// of the vertex its recoloring plan is anchored at.
#[allow(clippy::type_complexity)]
fn global_step(
    cur: &Graph,
    case: Case,
) -> Result<Option<(Graph, Vec<usize>, KSubgraphPlan)>, SolveError> {
    if !matches!(case, Case::Four | Case::Five) {
        return Ok(None);
    }
    let aux = build_aux(cur, case).map_err(|e| stall(format!("auxiliary graph: {e}")))?;
    let reports = component_surplus(cur, &aux);
    let Some(deficient) = reports.iter().find(|r| r.surplus < ratio(0, 1)) else {
        return Ok(None);
    };
    let plan = plan_k_subgraph(cur, case, &aux, &deficient.nodes)
        .map_err(|e| stall(format!("cycle plan: {e}")))?;
    let region = two_neighborhood(cur, plan.u);
    let (child, child_to_parent) = cur.remove_vertices(&region);
    Ok(Some((child, child_to_parent, plan)))
}

/// Colors the square of `cur` exactly.
///
/// The returned coloring keeps at least `budget` colors in its palette so
/// that extensions higher up the chain still see their full budget. With
/// `grow` (force mode) the exact search may also use more colors than the
/// budget, which is how remainders with dense squares get colored at all.
fn exact_square_coloring(cur: &Graph, budget: u32, grow: bool) -> Result<Coloring, SolveError> {
    let sq = neighboring_graph(cur);
    let ub = if grow {
        budget.max(cur.n() as u32).max(1)
    } else {
        budget
    };
    match chi_exact(&sq, ub) {
        ChiOutcome::Chromatic(k, col) => {
            let colors = (0..cur.n()).map(|v| col.get(v)).collect();
            Coloring::from_colors(colors, budget.max(k))
                .map_err(|e| stall(format!("exact remainder: {e}")))
        }
        ChiOutcome::NoneWithin(bound) => Err(stall(format!(
            "a {}-vertex remainder needs more than {bound} colors",
            cur.n()
        ))),
    }
}

/// One suspended level of the peel, waiting for its child's coloring.
enum Frame {
    Peeled {
        parent: Graph,
        step: ReductionStep,
    },
    Global {
        parent: Graph,
        plan: KSubgraphPlan,
        child_to_parent: Vec<usize>,
    },
}

/// Colors one connected component within `budget` colors, growing the
/// palette only where the contract allows it (low-degree components and
/// force-mode remainders).
fn solve_component(
    comp: Graph,
    component_delta: usize,
    budget: u32,
    force: bool,
    steps: &mut Vec<StepSummary>,
) -> Result<Coloring, SolveError> {
    let mut frames: Vec<Frame> = Vec::new();
    let mut cur = comp;
    let base = loop {
        if cur.n() == 0 {
            break Coloring::new_empty(0, budget);
        }
        let Some(case) = level_case(component_delta, cur.max_degree()) else {
            let col = exact_square_coloring(&cur, budget, force)?;
            steps.push(StepSummary::ExactBase { vertices: cur.n() });
            break col;
        };
        match peel(&cur, case) {
            Ok(Some((child, step))) => {
                steps.push(StepSummary::Config {
                    description: step.config.kind.describe(),
                    removed: step.config.deleted.len(),
                });
                frames.push(Frame::Peeled { parent: cur, step });
                cur = child;
            }
            Ok(None) => match global_step(&cur, case)? {
                Some((child, child_to_parent, plan)) => {
                    steps.push(StepSummary::KSubgraph {
                        anchor: plan.u,
                        removed: cur.n() - child.n(),
                    });
                    frames.push(Frame::Global {
                        parent: cur,
                        plan,
                        child_to_parent,
                    });
                    cur = child;
                }
                None if force && cur.n() <= FORCE_EXACT_LIMIT => {
                    let col = exact_square_coloring(&cur, budget, true)?;
                    steps.push(StepSummary::ExactBase { vertices: cur.n() });
                    break col;
                }
                None => {
                    return Err(stall(format!(
                        "no reducible configuration in a {}-vertex remainder of maximum degree {}",
                        cur.n(),
                        cur.max_degree()
                    )));
                }
            },
            Err(e) => return Err(stall(format!("peel: {e}"))),
        }
    };

    let mut col = base;
    while let Some(frame) = frames.pop() {
        col = match frame {
            Frame::Peeled { parent, step } => {
                extend(&parent, &step, &col).map_err(|e| stall(format!("extension: {e}")))?
            }
            Frame::Global {
                parent,
                plan,
                child_to_parent,
            } => {
                let mut partial = Coloring::new_empty(parent.n(), col.palette());
                for (ci, &pi) in child_to_parent.iter().enumerate() {
                    if let Some(c) = col.get(ci) {
                        partial.set(pi, c);
                    }
                }
                color_via_k(&parent, &plan, &partial)
                    .map_err(|e| stall(format!("cycle recoloring: {e}")))?
            }
        };
    }
    Ok(col)
}

/// Produces a verified injective coloring of `g`.
///
/// The budget is `max_degree + 2` colors (one color for an edgeless graph).
/// In strict mode every component of maximum degree 3 must have maximum
/// average degree strictly below 36/13, and every component of maximum
/// degree at least 4 strictly below 14/5; a component that fails its bound
/// is reported as [`SolveError::HypothesisViolated`]. Components of
/// maximum degree at most 2 carry no density requirement and are colored
/// exactly; three colors always suffice for them, so they stay within any
/// budget. Force mode skips the density checks and falls back to exact
/// coloring on small stalled remainders, growing the palette as far as
/// necessary.
///
/// The returned coloring always passes [`verify_injective`]; a violation,
/// an unextendable level, or an oversized stalled remainder surfaces as
/// [`SolveError::Stalled`].
pub fn color_injective(g: &Graph, mode: Mode) -> Result<(Coloring, Report), SolveError> {
    let start = Instant::now();
    let force = mode == Mode::Force;
    let mad = mad_exact(g).ok().map(|w| w.density);
    let budget = match g.max_degree() {
        0 => 1,
        d => (d + 2) as u32,
    };

    let mut steps = Vec::new();
    let mut pieces = Vec::new();
    let mut palette = budget;
    for component in g.connected_components() {
        let (comp, to_global) = g.induced_subgraph(&component);
        let component_delta = comp.max_degree();
        if component_delta >= 3 && !force {
            let bound = if component_delta == 3 {
                ratio(36, 13)
            } else {
                ratio(14, 5)
            };
            let witness = mad_exact(&comp).expect("component is nonempty");
            if witness.density >= bound {
                return Err(SolveError::HypothesisViolated {
                    mad: witness.density,
                    bound,
                });
            }
        }
        let col = solve_component(comp, component_delta, budget, force, &mut steps)?;
        palette = palette.max(col.palette());
        pieces.push((col, to_global));
    }

    let mut full = Coloring::new_empty(g.n(), palette);
    for (col, to_global) in pieces {
        for (local, &v) in to_global.iter().enumerate() {
            let c = col
                .get(local)
                .ok_or_else(|| stall(format!("vertex {v} left uncolored")))?;
            full.set(v, c);
        }
    }
    match verify_injective(g, &full) {
        Ok(None) => {}
        Ok(Some(violation)) => {
            return Err(stall(format!(
                "vertices {} and {} share color and neighbor {}",
                violation.u, violation.v, violation.witness
            )));
        }
        Err(e) => return Err(stall(format!("verification: {e}"))),
    }

    let report = Report {
        mad,
        palette,
        colors_used: full.colors_used(),
        steps,
        runtime: start.elapsed(),
    };
    Ok((full, report))
}

/// Replays the peel machinery without coloring anything, recording every
/// deletion until the graph is gone.
///
/// Unlike [`color_injective`] there is no exact base: low-degree
/// remainders keep peeling through the degree-3 configurations (isolated
/// and pendant vertices, adjacent 2-vertices), which dismantle every graph
/// of maximum degree at most 2. No density hypothesis is checked; if the
/// machinery runs out of moves the trace ends in [`SolveError::Stalled`].
pub fn reduction_trace(g: &Graph) -> Result<Vec<StepSummary>, SolveError> {
    let mut steps = Vec::new();
    for component in g.connected_components() {
        let (comp, _) = g.induced_subgraph(&component);
        let component_delta = comp.max_degree();
        let mut cur = comp;
        while cur.n() > 0 {
            let case =
                level_case(component_delta, cur.max_degree()).unwrap_or(Case::Three);
            match peel(&cur, case).map_err(|e| stall(format!("peel: {e}")))? {
                Some((child, step)) => {
                    steps.push(StepSummary::Config {
                        description: step.config.kind.describe(),
                        removed: step.config.deleted.len(),
                    });
                    cur = child;
                }
                None => match global_step(&cur, case)? {
                    Some((child, _, plan)) => {
                        steps.push(StepSummary::KSubgraph {
                            anchor: plan.u,
                            removed: cur.n() - child.n(),
                        });
                        cur = child;
                    }
                    None => {
                        return Err(stall(format!(
                            "no reducible configuration in a {}-vertex remainder of maximum degree {}",
                            cur.n(),
                            cur.max_degree()
                        )));
                    }
                },
            }
        }
    }
    Ok(steps)
}
