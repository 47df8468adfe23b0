//! Morita reductions: eliminate sources, then collapse entry-free cycles
//! to loops, certifying every step.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{fullness_certificate, FullnessIdentity, GeneratorImages, HomCertificate};
use crate::error::StructureError;
use crate::graph::{Cycle, GeneratorTable, Graph, GraphSpec, VertexId, VertexSet};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoritaStepKind {
    SourceElimination(VertexId),
    /// The collapsed cycle, in the graph before the step.
    CycleToLoop(Cycle),
}

/// One step `L(before) ~ L(after)`: `θ: L(after) → L(before)` onto the
/// corner at `ε = θ(1)`, plus expressions of the vertices outside `ε` in
/// the ideal generated by `ε`.
#[derive(Clone, Debug)]
pub struct MoritaStep {
    pub kind: MoritaStepKind,
    pub before: Arc<Graph>,
    pub after: Arc<Graph>,
    pub theta: GeneratorImages,
    pub hom: HomCertificate,
    pub fullness: Vec<FullnessIdentity>,
    /// Vertices left isolated by this step, each splitting off a factor `K`.
    pub split_off: usize,
}

impl MoritaStep {
    fn new(
        kind: MoritaStepKind,
        before: &Arc<Graph>,
        (after, table): (Graph, GeneratorTable),
        field: &Field,
    ) -> Result<Self, StructureError> {
        let after = Arc::new(after);
        let theta = GeneratorImages::from_table(&after, before, field, &table);
        let hom = theta.verify().map_err(|v| {
            StructureError::StepVerification(
                v.iter()
                    .map(|v| format!("{}: {}", v.relation, v.residual))
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        let covered: VertexSet = table.vertices.iter().flatten().copied().collect();
        let missing: VertexSet = before
            .vertex_ids()
            .filter(|v| !covered.contains(v))
            .collect();
        let fullness = fullness_certificate(before, field, &missing)
            .map_err(|e| StructureError::StepVerification(e.to_string()))?;
        let split_off = isolated(&after)
            .len()
            .saturating_sub(isolated(before).len());
        Ok(MoritaStep {
            kind,
            before: before.clone(),
            after,
            theta,
            hom,
            fullness,
            split_off,
        })
    }

    pub fn summary(&self) -> StepSummary {
        let (kind, target) = match &self.kind {
            MoritaStepKind::SourceElimination(v) => (
                "source_elimination",
                self.before.vertex_name(*v).to_string(),
            ),
            MoritaStepKind::CycleToLoop(c) => ("cycle_to_loop", c.display(&self.before)),
        };
        StepSummary {
            kind,
            target,
            vertices_before: self.before.vertex_count(),
            vertices_after: self.after.vertex_count(),
            relations_checked: self.hom.relations_checked,
            fullness: self
                .fullness
                .iter()
                .map(|f| f.display(&self.before))
                .collect(),
            split_off: self.split_off,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub kind: &'static str,
    pub target: String,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub relations_checked: usize,
    pub fullness: Vec<String>,
    pub split_off: usize,
}

/// The result of [`reduce_pipeline`]: `L(E)` is Morita equivalent to
/// `L(graph')×K^t`, where `graph'` drops the `t` isolated vertices.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: Arc<Graph>,
    pub steps: Vec<MoritaStep>,
    pub t: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub schema: u32,
    pub graph: GraphSpec,
    pub t: usize,
    pub steps: Vec<StepSummary>,
}

impl Reduction {
    pub fn report(&self) -> ReductionReport {
        ReductionReport {
            schema: 1,
            graph: self.graph.to_spec(),
            t: self.t,
            steps: self.steps.iter().map(MoritaStep::summary).collect(),
        }
    }
}

fn isolated(g: &Graph) -> Vec<VertexId> {
    g.vertex_ids()
        .filter(|&v| g.is_sink(v) && g.in_classes(v).is_empty())
        .collect()
}

fn entry_free_cycle(g: &Graph) -> Option<Cycle> {
    g.enumerate_cycles()
        .into_iter()
        .find(|c| c.len() > 1 && c.vertices(g).iter().all(|&v| g.in_degree(v) == Some(1)))
}

/// Eliminates non-sink sources one at a time (least vertex first), then
/// replaces each cycle without entries of length at least two by a loop.
pub fn reduce_pipeline(g: &Graph, collapse_cycles: bool) -> Result<Reduction, StructureError> {
    let field = Field::Rational;
    let mut cur = Arc::new(g.clone());
    let mut steps = Vec::new();
    while let Some(v) = cur.sources().into_iter().find(|&v| !cur.is_sink(v)) {
        let step = MoritaStep::new(
            MoritaStepKind::SourceElimination(v),
            &cur,
            cur.source_eliminate(v)?,
            &field,
        )?;
        cur = step.after.clone();
        steps.push(step);
    }
    while let Some(c) = entry_free_cycle(&cur).filter(|_| collapse_cycles) {
        let built = cur.cycle_to_loop(&c)?;
        let step = MoritaStep::new(MoritaStepKind::CycleToLoop(c), &cur, built, &field)?;
        cur = step.after.clone();
        steps.push(step);
    }
    let t = isolated(&cur).len();
    Ok(Reduction {
        graph: cur,
        steps,
        t,
    })
}

/// Sorted lengths of the cycles of `g`.
pub fn cycle_lengths(g: &Graph) -> Vec<usize> {
    let mut out: Vec<usize> = g.enumerate_cycles().iter().map(Cycle::len).collect();
    out.sort_unstable();
    out
}
