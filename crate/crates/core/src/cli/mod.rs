//! Batch driver behind the `inertia-forms` binary.

pub mod scenario;

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::action::{FiniteGroupAction, LoopSpaceModel};
use crate::brforms::{morita_check, resolution_check, BasicComplex};
use crate::circle::{circle_check, CircleModel};
use crate::error::{Error, Result};
use crate::graded::Slot;
use crate::report::{Assertion, DimTable, Report};
use crate::variety::{chart_transfer, cocycle_check, gg_complex, SubspaceArrangement};

pub use scenario::{ActionSpec, Format, Scenario};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Loopspace,
    Dims,
    Cohomology,
    Verify,
    HomotopyCheck,
    Morita,
    ChartCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Loopspace => "loopspace",
            Command::Dims => "dims",
            Command::Cohomology => "cohomology",
            Command::Verify => "verify",
            Command::HomotopyCheck => "homotopy-check",
            Command::Morita => "morita",
            Command::ChartCheck => "chart-check",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Command::Loopspace,
            Command::Dims,
            Command::Cohomology,
            Command::Verify,
            Command::HomotopyCheck,
            Command::Morita,
            Command::ChartCheck,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

/// Command-line overrides of scenario settings.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// Zero the differential at its lowest nontrivial slot.
    pub fault: bool,
}

enum Model {
    Finite(BasicComplex),
    Circle(CircleModel),
}

impl Model {
    fn max_degree(&self) -> usize {
        match self {
            Model::Finite(c) => c.max_degree(),
            Model::Circle(c) => c.max_degree(),
        }
    }

    fn dims(&self) -> DimTable {
        match self {
            Model::Finite(c) => c.dims(),
            Model::Circle(c) => c.dims(),
        }
    }

    fn cohomology(&self, w: usize) -> Result<Vec<usize>> {
        match self {
            Model::Finite(c) => c.cohomology(w),
            Model::Circle(c) => c.cohomology(w),
        }
    }

    fn fault(&self) -> Option<Slot> {
        match self {
            Model::Finite(c) => c.fault(),
            Model::Circle(c) => c.fault(),
        }
    }

    fn faulted(self, fault: bool) -> Self {
        match (self, fault) {
            (Model::Finite(c), true) => Model::Finite(c.with_fault()),
            (Model::Circle(c), true) => Model::Circle(c.with_fault()),
            (m, false) => m,
        }
    }
}

fn group(spec: &ActionSpec) -> Result<FiniteGroupAction> {
    match spec {
        ActionSpec::Finite {
            generators, max_order, ..
        } => FiniteGroupAction::close_group(generators, *max_order),
        ActionSpec::Circle(_) => Err(Error::Config("this command needs a finite action".into())),
    }
}

fn build_model(scenario: &Scenario, cutoff: usize) -> Result<Model> {
    match &scenario.action {
        ActionSpec::Finite { lie_generators, .. } => {
            let g = group(&scenario.action)?;
            Ok(Model::Finite(BasicComplex::build_horizontal(
                &g,
                cutoff,
                lie_generators,
            )?))
        }
        ActionSpec::Circle(cw) => Ok(Model::Circle(CircleModel::build(cw, cutoff)?)),
    }
}

/// Basic slot dimensions of the scenario's complex up to `cutoff`.
pub fn basic_dims(scenario: &Scenario, cutoff: usize) -> Result<DimTable> {
    Ok(build_model(scenario, cutoff)?.dims())
}

/// Runs a command. Errors are returned only for malformed input or for
/// internal failures; failed mathematical checks appear as failing
/// assertions in the report.
pub fn run(scenario: &Scenario, command: Command, opts: &RunOptions) -> Result<Report> {
    let cutoff = opts.cutoff.unwrap_or(scenario.cutoff);
    if cutoff < 1 {
        return Err(Error::Config("cutoff must be at least 1".into()));
    }
    let mut report = Report::new(scenario.name.clone());
    match command {
        Command::Loopspace => report.table("loopspace", loopspace(scenario)?),
        Command::Dims => {
            let model = build_model(scenario, cutoff)?;
            report.table("basic_dims", model.dims().to_json());
            if let Model::Circle(c) = &model {
                report.table("relative_dims", c.relative_dims().to_json());
            }
        }
        Command::Cohomology => {
            let model = build_model(scenario, cutoff)?.faulted(opts.fault);
            let mut t = DimTable::new();
            for w in 0..=cutoff {
                for (k, d) in model.cohomology(w)?.into_iter().enumerate() {
                    t.insert(Slot::new(w, k), d);
                }
            }
            report.table("cohomology", t.to_json());
        }
        Command::Verify => {
            let model = build_model(scenario, cutoff)?.faulted(opts.fault);
            report.extend(match &model {
                Model::Finite(c) => resolution_check(c)?,
                Model::Circle(c) => circle_check(c)?,
            });
            if let Some(f) = model.fault() {
                report.table("fault", json!(f));
            }
            if scenario.subgroup.is_some() {
                report.extend(morita(scenario, cutoff)?);
            }
            if scenario.charts.is_some() {
                report.extend(charts(scenario, cutoff)?);
            }
        }
        Command::HomotopyCheck => {
            let model = build_model(scenario, cutoff)?.faulted(opts.fault);
            report.extend(homotopy_check(
                &model,
                cutoff,
                opts.seed.unwrap_or(scenario.seed),
                opts.samples.unwrap_or(scenario.samples),
            ));
        }
        Command::Morita => report.extend(morita(scenario, cutoff)?),
        Command::ChartCheck => report.extend(charts(scenario, cutoff)?),
    }
    report.scenario = scenario.name.clone();
    Ok(report)
}

fn matrix_json(m: &crate::algebra::Matrix) -> Value {
    json!(m.row_vecs())
}

fn loopspace(scenario: &Scenario) -> Result<Value> {
    match &scenario.action {
        ActionSpec::Finite { .. } => {
            let g = group(&scenario.action)?;
            let model = LoopSpaceModel::new(&g)?;
            let rows: Vec<Value> = model
                .pieces()
                .iter()
                .map(|p| {
                    json!({
                        "element": p.element,
                        "matrix": matrix_json(g.matrix(p.element)),
                        "class": g.class_of(p.element),
                        "dim": p.dim(),
                        "basis": matrix_json(p.basis()),
                    })
                })
                .collect();
            Ok(Value::Array(rows))
        }
        ActionSpec::Circle(cw) => {
            let arr = cw.arrangement();
            let names = ["theta-axis x fixed directions", "theta = 0"];
            let rows: Vec<Value> = arr
                .components()
                .iter()
                .zip(names)
                .map(|(c, name)| json!({"stratum": name, "dim": c.dim(), "basis": matrix_json(c.basis())}))
                .collect();
            Ok(Value::Array(rows))
        }
    }
}

fn homotopy_check(model: &Model, cutoff: usize, seed: u64, samples: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally: BTreeMap<Slot, (usize, usize)> = BTreeMap::new();
    for _ in 0..samples {
        let slot = Slot::new(rng.random_range(0..=cutoff), rng.random_range(0..=model.max_degree()));
        let ok = match model {
            Model::Finite(c) => {
                let v = c.random_basic(slot, &mut rng);
                c.homotopy_identity(slot, &v)
            }
            Model::Circle(c) => {
                let v = c.random_basic(slot, &mut rng);
                c.homotopy_identity(slot, &v)
            }
        };
        let e = tally.entry(slot).or_default();
        e.0 += 1;
        e.1 += usize::from(ok);
    }
    let mut report = Report::new("homotopy-check");
    report.table("sampling", json!({"seed": seed, "samples": samples}));
    for (slot, (total, passed)) in tally {
        report.assert(Assertion::new("homotopy identity", Some(slot), total, passed));
    }
    report
}

fn morita(scenario: &Scenario, cutoff: usize) -> Result<Report> {
    let sub = scenario
        .subgroup
        .as_ref()
        .ok_or_else(|| Error::Config("the scenario has no subgroup".into()))?;
    let ActionSpec::Finite { .. } = &scenario.action else {
        return Err(Error::Config("a subgroup needs a finite action".into()));
    };
    let g = group(&scenario.action)?;
    let ActionSpec::Finite { generators, .. } = &scenario.action else {
        unreachable!()
    };
    let idx = sub
        .generators
        .iter()
        .map(|&i| {
            g.index_of(&generators[i])
                .ok_or_else(|| Error::Config("generator missing from group".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = g.subgroup(&idx)?;
    let rho = g.extend_representation(&idx, &sub.representation, sub.slice_dim)?;
    let mut report = morita_check(&g, &h, &rho, cutoff)?;
    report.table(
        "subgroup",
        json!({"order": h.len(), "index": g.order() / h.len(), "slice_dim": sub.slice_dim}),
    );
    Ok(report)
}

fn charts(scenario: &Scenario, cutoff: usize) -> Result<Report> {
    let spec = scenario
        .charts
        .as_ref()
        .ok_or_else(|| Error::Config("the scenario has no charts".into()))?;
    let mut complexes = BTreeMap::new();
    let mut dims = serde_json::Map::new();
    for c in &spec.charts {
        let arr = SubspaceArrangement::new(c.dim, c.components.clone())?;
        let q = gg_complex(&arr, cutoff)?;
        dims.insert(c.name.clone(), q.dims().to_json());
        complexes.insert(c.name.clone(), q);
    }
    let mut report = Report::new("charts");
    report.table("chart_dims", Value::Object(dims));
    let mut transfers = BTreeMap::new();
    for t in &spec.transfers {
        let (src, dst) = (&complexes[&t.from], &complexes[&t.to]);
        let eta = chart_transfer(src, dst, &t.embedding)?;
        report.assert(Assertion::check(
            format!("transfer {} is an isomorphism", t.name),
            None,
            eta.is_isomorphism(),
        ));
        report.assert(Assertion::check(
            format!("transfer {} commutes with d", t.name),
            None,
            eta.commutes_with_differentials(src, dst)?,
        ));
        transfers.insert(t.name.clone(), (t.from.clone(), t.to.clone(), eta));
    }
    for [a, b] in &spec.equal_pairs {
        let (fa, ta, ea) = &transfers[a];
        let (fb, tb, eb) = &transfers[b];
        if fa != fb || ta != tb {
            return Err(Error::Config(format!("transfers {a} and {b} connect different charts")));
        }
        report.assert(Assertion::check(format!("transfers {a} and {b} agree"), None, ea == eb));
    }
    let find = |from: &str, to: &str| {
        transfers
            .values()
            .find(|(f, t, _)| f == from && t == to)
            .map(|(_, _, e)| e)
            .ok_or_else(|| Error::Config(format!("no transfer from {from} to {to}")))
    };
    for [a, b, c] in &spec.cocycles {
        let ok = cocycle_check(find(a, c)?, find(a, b)?, find(b, c)?)?;
        report.assert(Assertion::check(format!("cocycle {a} {b} {c}"), None, ok));
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Table => report.to_table(),
    }
}

/// Exit status for a run: 0 if every assertion passed, 1 if some failed or
/// an internal check fired, 2 for configuration and structural errors.
pub fn exit_code(result: &Result<Report>) -> i32 {
    match result {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(e) if e.is_structural() => 2,
        Err(_) => 1,
    }
}

/// Turns a non-structural error into a report with one failing assertion.
pub fn failure_report(scenario: &str, err: &Error) -> Report {
    let mut r = Report::new(scenario);
    let slot = match err {
        Error::ComplexNotClosed { slot } | Error::InternalConsistency { slot, .. } => Some(*slot),
        _ => None,
    };
    r.assert(Assertion::check(err.to_string(), slot, false));
    r
}
