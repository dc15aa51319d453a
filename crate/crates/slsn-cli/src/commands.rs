use crate::report::{rat, Bracket, RunReport};
use crate::{ClassifyArgs, Ctx, Exit, GadgetArgs, OracleCommand, SolveArgs, VerifyArgs};
use serde_json::{json, Value};
use slsn::approx::{approx_const, approx_star, opt_low};
use slsn::classifier::{classify as classify_demands, DemandClass};
use slsn::exact_const::{solve_unit_cost, solve_unit_length, ExactOptions};
use slsn::gadgets::{build_gadget, verify_structure, witness_solution, CostFlavor, GadgetKind, GadgetRecipe};
use slsn::graph::feasibility_check;
use slsn::io::{self, InstanceFile, SolutionJson};
use slsn::oracle::{brute_force_mcc, brute_force_restricted_path, brute_force_slsn, densest_k_count, OracleBudget};
use slsn::star_dst::solve_slst;
use slsn::{Rational, Result, SlsnError, SlsnInstance, Solution};
use std::path::{Path, PathBuf};
use std::time::Instant;

fn with_path(path: &Path, e: SlsnError) -> SlsnError {
    match e {
        SlsnError::Parse { line, msg } => SlsnError::Input(format!("{}:{line}: {msg}", path.display())),
        SlsnError::Io(err) => SlsnError::Input(format!("{}: {err}", path.display())),
        SlsnError::Json(err) => SlsnError::Input(format!("{}: {err}", path.display())),
        other => other,
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(path, e.into()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| with_path(path, e.into()))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    io::parse_instance(&read(path)?).map_err(|e| with_path(path, e))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn elapsed(ctx: &Ctx, start: Instant) -> Option<u64> {
    ctx.timing.then(|| start.elapsed().as_millis() as u64)
}

pub fn classify(_ctx: &Ctx, a: ClassifyArgs) -> Result<Exit> {
    let h = if a.demands_only {
        io::parse_demand_graph(&read(&a.instance)?).map_err(|e| with_path(&a.instance, e))?
    } else {
        read_instance(&a.instance)?.instance.demands
    };
    let class = classify_demands(&h, a.k)?;
    crate::out(&format!("{class}\n"));
    if let DemandClass::Hard { witness } = &class {
        crate::out(&format!("{}\n", serde_json::to_string(witness)?));
    }
    Ok(Exit::Ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Solver {
    ExactConst,
    UnitCost,
    Star,
    ApproxConst,
    ApproxStar,
}

impl Solver {
    fn name(self) -> &'static str {
        match self {
            Solver::ExactConst => "exact_const",
            Solver::UnitCost => "exact_unit_cost",
            Solver::Star => "star_dst",
            Solver::ApproxConst => "approx_const",
            Solver::ApproxStar => "approx_star",
        }
    }

    fn approximate(self) -> bool {
        matches!(self, Solver::ApproxConst | Solver::ApproxStar)
    }
}

fn forced(a: &SolveArgs) -> Option<Solver> {
    [
        (a.exact_const, Solver::ExactConst),
        (a.unit_cost, Solver::UnitCost),
        (a.star, Solver::Star),
        (a.approx_const, Solver::ApproxConst),
        (a.approx_star, Solver::ApproxStar),
    ]
    .into_iter()
    .find(|f| f.0)
    .map(|f| f.1)
}

fn auto(inst: &SlsnInstance, class: &DemandClass) -> Solver {
    let g = &inst.graph;
    match class {
        DemandClass::Star { .. } if g.has_unit_lengths() => Solver::Star,
        DemandClass::Star { .. } => Solver::ApproxStar,
        _ if g.has_unit_lengths() => Solver::ExactConst,
        _ if g.has_unit_costs() && g.has_integer_lengths() => Solver::UnitCost,
        _ => Solver::ApproxConst,
    }
}

fn run_solver(s: Solver, inst: &SlsnInstance, eps: &Rational, jobs: usize) -> Result<Solution> {
    let opts = ExactOptions { jobs };
    match s {
        Solver::ExactConst => solve_unit_length(inst, opts),
        Solver::UnitCost => solve_unit_cost(inst, opts),
        Solver::Star => solve_slst(inst),
        Solver::ApproxConst => approx_const(inst, eps, jobs),
        Solver::ApproxStar => approx_star(inst, eps),
    }
}

pub fn solve(ctx: &Ctx, a: SolveArgs) -> Result<Exit> {
    let start = Instant::now();
    let inst = read_instance(&a.instance)?.instance;
    let class = classify_demands(&inst.demands, a.k)?;
    let mut report = RunReport::new(ctx.command.clone());
    report.detail("class", class.to_string());
    let solver = match forced(&a) {
        Some(Solver::Star | Solver::ApproxStar) if !matches!(class, DemandClass::Star { .. }) && inst.p() > 0 => {
            return Err(SlsnError::Input(format!(
                "star solvers need star demands; the demand graph classifies as {class}"
            )));
        }
        Some(s) => s,
        None => match &class {
            DemandClass::Hard { witness } if !a.approx_anyway => {
                report.detail("witness", witness);
                report.wall_ms = elapsed(ctx, start);
                ctx.emit(&report);
                eprintln!("refusing: the demand graph is hard ({class}); pass --approx-anyway to run approx_const");
                return Ok(Exit::Refused);
            }
            DemandClass::Hard { .. } => Solver::ApproxConst,
            c => auto(&inst, c),
        },
    };
    report.solver = Some(solver.name().to_string());
    let outcome = run_solver(solver, &inst, &a.eps, ctx.jobs);
    if solver.approximate() {
        report.ratio_bound = Some(rat(&(Rational::from_integer(1.into()) + &a.eps)));
        if let Ok(b) = opt_low(&inst) {
            report.c_bracket = Some(Bracket { low: rat(&b.c), high: rat(&b.upper(inst.n())) });
        }
    }
    let exit = match outcome {
        Ok(sol) => {
            let check = feasibility_check(&inst, &sol.edges)?;
            report.feasibility(&check, &sol.cost);
            report.attach(&sol);
            if let Some(out) = &a.output {
                write(out, &io::solution_json(&sol))?;
            }
            if check.feasible() {
                Exit::Ok
            } else {
                Exit::Infeasible
            }
        }
        Err(SlsnError::Infeasible) => {
            report.feasible = Some(false);
            Exit::Infeasible
        }
        Err(e) => return Err(e),
    };
    report.wall_ms = elapsed(ctx, start);
    ctx.emit(&report);
    Ok(exit)
}

fn flavor(a: &GadgetArgs) -> CostFlavor {
    match (&a.eps, a.poly_cost) {
        (Some(eps), true) => CostFlavor::PolyCost { eps: eps.clone() },
        _ => CostFlavor::UnitCost,
    }
}

pub fn gadget(ctx: &Ctx, a: GadgetArgs) -> Result<Exit> {
    let start = Instant::now();
    let mcc = io::parse_mcc(&read(&a.mcc)?).map_err(|e| with_path(&a.mcc, e))?;
    if mcc.k() != a.k {
        return Err(SlsnError::Input(format!("--k {} disagrees with k = {} in {}", a.k, mcc.k(), a.mcc.display())));
    }
    let takes_h = matches!(a.case, GadgetKind::Bipartite | GadgetKind::General);
    let demand_graph = match &a.demand_graph {
        Some(_) if !takes_h => {
            return Err(SlsnError::Input(format!("--demand-graph does not apply to {}", a.case.name())));
        }
        Some(p) => Some(io::parse_demand_graph(&read(p)?).map_err(|e| with_path(p, e))?.pairs().to_vec()),
        None => None,
    };
    let side_map = match &a.side_map {
        Some(_) if a.case != GadgetKind::Bipartite => {
            return Err(SlsnError::Input("--side-map only applies to bipartite".into()));
        }
        Some(s) => Some(io::parse_vertex_list(s)?),
        None => None,
    };
    let recipe = GadgetRecipe { kind: a.case, mcc, demand_graph, side_map, flavor: flavor(&a) };
    let bundle = build_gadget(&recipe)?;
    let file = InstanceFile { instance: bundle.instance.clone(), gadget: Some(bundle.recipe.clone()) };
    let text = if is_json(&a.output) { io::instance_json(&file) } else { io::instance_text(&file) };
    write(&a.output, &text)?;

    let mut report = RunReport::new(ctx.command.clone());
    report.detail("case", a.case.name());
    report.detail("case_tag", bundle.case_tag());
    report.detail("k", bundle.k);
    report.detail("flavor", bundle.cost_flavor.to_string());
    report.detail("g_value", rat(&bundle.g_value));
    report.detail("L", rat(&bundle.instance.bound));
    report.detail("n", bundle.instance.n());
    report.detail("m", bundle.instance.m());
    report.detail("p", bundle.instance.p());
    report.detail("pattern", &bundle.pattern.vertex_map);
    report.detail("instance_out", a.output.display().to_string());
    let mut exit = Exit::Ok;
    if let Some(clique) = &a.emit_witness {
        let clique = io::parse_vertex_list(clique)?;
        let sol = witness_solution(&bundle, &clique)?;
        let out = a.witness_out.clone().unwrap_or_else(|| {
            let mut p = a.output.clone().into_os_string();
            p.push(".witness.json");
            PathBuf::from(p)
        });
        write(&out, &io::solution_json(&sol))?;
        let check = feasibility_check(&bundle.instance, &sol.edges)?;
        report.feasibility(&check, &sol.cost);
        report.detail("witness_out", out.display().to_string());
        report.detail("structure_failures", verify_structure(&bundle, &sol).failure_count());
        if !check.feasible() {
            exit = Exit::Infeasible;
        }
    }
    report.wall_ms = elapsed(ctx, start);
    ctx.emit(&report);
    Ok(exit)
}

/// Accepts a bare solution or a report that embeds one.
fn solution_json(text: &str) -> Result<SolutionJson> {
    let v: Value = serde_json::from_str(text)?;
    let v = match v {
        Value::Object(mut map) if map.contains_key("solution") => map.remove("solution").expect("checked"),
        other => other,
    };
    Ok(serde_json::from_value(v)?)
}

pub fn verify(ctx: &Ctx, a: VerifyArgs) -> Result<Exit> {
    let start = Instant::now();
    let file = read_instance(&a.instance)?;
    let inst = &file.instance;
    let j = solution_json(&read(&a.solution)?).map_err(|e| with_path(&a.solution, e))?;
    let sol = io::solution_from_json(j, inst).map_err(|e| with_path(&a.solution, e))?;
    let check = feasibility_check(inst, &sol.edges)?;
    let mut report = RunReport::new(ctx.command.clone());
    report.feasibility(&check, &inst.graph.cost_of(&sol.edges));
    report.detail("unsatisfied", check.unsatisfied());
    let certificate = sol.check(inst).err().map(|e| e.to_string());
    report.detail("certificate_error", &certificate);
    if let Some(recipe) = &file.gadget {
        let bundle = build_gadget(recipe)?;
        let matches = bundle.instance == *inst;
        report.detail("gadget", recipe.kind.name());
        report.detail("recipe_matches", matches);
        if matches {
            report.detail("structure", verify_structure(&bundle, &sol));
        }
    }
    report.wall_ms = elapsed(ctx, start);
    ctx.emit(&report);
    Ok(if check.feasible() && certificate.is_none() { Exit::Ok } else { Exit::Infeasible })
}

pub fn oracle(ctx: &Ctx, c: OracleCommand) -> Result<Exit> {
    let start = Instant::now();
    let mut report = RunReport::new(ctx.command.clone());
    let budget = OracleBudget::default();
    let mut exit = Exit::Ok;
    match c {
        OracleCommand::Slsn { instance, max_edges } => {
            let inst = read_instance(&instance)?.instance;
            report.solver = Some("brute_force_slsn".into());
            match brute_force_slsn(&inst, OracleBudget { max_edges, ..budget }, ctx.jobs) {
                Ok(sol) => {
                    report.feasibility(&feasibility_check(&inst, &sol.edges)?, &sol.cost);
                    report.attach(&sol);
                }
                Err(SlsnError::Infeasible) => {
                    report.feasible = Some(false);
                    exit = Exit::Infeasible;
                }
                Err(e) => return Err(e),
            }
        }
        OracleCommand::Path { instance, from, to, bound } => {
            let inst = read_instance(&instance)?.instance;
            let bound = bound.unwrap_or_else(|| inst.bound.clone());
            report.solver = Some("brute_force_restricted_path".into());
            let path = brute_force_restricted_path(&inst.graph, from, to, &bound, budget)?;
            let shown = path.map(|p| {
                json!({
                    "vertices": p.vertices,
                    "edges": p.edges,
                    "cost": rat(&p.cost(&inst.graph)),
                    "length": rat(&p.length(&inst.graph)),
                })
            });
            report.detail("bound", rat(&bound));
            report.detail("path", shown);
        }
        OracleCommand::Mcc { mcc } => {
            let m = io::parse_mcc(&read(&mcc)?).map_err(|e| with_path(&mcc, e))?;
            report.solver = Some("brute_force_mcc".into());
            report.detail("clique", brute_force_mcc(&m, budget)?);
            report.detail("densest_count", densest_k_count(&m, budget)?);
        }
    }
    report.wall_ms = elapsed(ctx, start);
    ctx.emit(&report);
    Ok(exit)
}
