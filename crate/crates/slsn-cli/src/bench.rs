use crate::{BenchArgs, Ctx, Exit};
use slsn::approx::{approx_const, approx_star};
use slsn::exact_const::{solve_unit_cost, solve_unit_length, ExactOptions};
use slsn::graph::feasibility_check;
use slsn::oracle::{brute_force_slsn, OracleBudget};
use slsn::random::{feasible_corpus, RandomConfig, Weights};
use slsn::rational::{format_rational, ratio};
use slsn::star_dst::solve_slst;
use slsn::{Rational, Result, SlsnInstance, Solution};
use std::time::Instant;

const SUITES: [&str; 5] = ["exact", "unit-cost", "star", "approx-const", "approx-star"];

fn config(suite: &str) -> RandomConfig {
    let mut cfg = RandomConfig::small_unit_length();
    let fractions = Weights::Fraction { num: 1..=8, den: 1..=4 };
    match suite {
        "unit-cost" => {
            cfg.lengths = Weights::Integer(1..=4);
            cfg.costs = Weights::Unit;
        }
        "star" => {
            cfg.star = true;
            cfg.p = 1..=4;
        }
        "approx-const" => cfg.lengths = fractions,
        "approx-star" => {
            cfg.star = true;
            cfg.p = 1..=4;
            cfg.lengths = fractions;
        }
        _ => {}
    }
    cfg
}

fn solve(suite: &str, inst: &SlsnInstance, jobs: usize, eps: &Rational) -> Result<Solution> {
    let opts = ExactOptions { jobs };
    match suite {
        "exact" => solve_unit_length(inst, opts),
        "unit-cost" => solve_unit_cost(inst, opts),
        "star" => solve_slst(inst),
        "approx-const" => approx_const(inst, eps, jobs),
        _ => approx_star(inst, eps),
    }
}

/// Runs each suite on a seeded feasible corpus and prints one CSV row per
/// instance. Exact suites must match the oracle; approximate ones must stay
/// within `1 + ε` of it.
pub fn run(ctx: &Ctx, a: BenchArgs) -> Result<Exit> {
    let eps = ratio(1, 4);
    let suites: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
    let mut header = "suite,index,n,m,p,cost,oracle_cost,ratio,ok".to_string();
    if ctx.timing {
        header.push_str(",solver_us,oracle_us");
    }
    crate::out(&format!("{header}\n"));
    let mut all_ok = true;
    for suite in suites {
        let offset = SUITES.iter().position(|s| *s == suite).expect("known suite") as u64;
        let corpus = feasible_corpus(a.seed.wrapping_add(offset), a.count, &config(suite));
        for (i, inst) in corpus.iter().enumerate() {
            let t0 = Instant::now();
            let sol = solve(suite, inst, ctx.jobs, &eps)?;
            let solver_us = t0.elapsed().as_micros();
            let t1 = Instant::now();
            let best = brute_force_slsn(inst, OracleBudget::default(), ctx.jobs)?;
            let oracle_us = t1.elapsed().as_micros();
            let feasible = feasibility_check(inst, &sol.edges)?.feasible();
            let allowed = if suite.starts_with("approx") {
                &best.cost * (Rational::from_integer(1.into()) + &eps)
            } else {
                best.cost.clone()
            };
            let ok = feasible && sol.cost <= allowed && sol.cost >= best.cost;
            all_ok &= ok;
            let r = if best.cost == Rational::from_integer(0.into()) {
                if sol.cost == best.cost { "1".to_string() } else { "-".to_string() }
            } else {
                format_rational(&(&sol.cost / &best.cost))
            };
            let mut row = format!(
                "{suite},{i},{},{},{},{},{},{r},{ok}",
                inst.n(),
                inst.m(),
                inst.p(),
                format_rational(&sol.cost),
                format_rational(&best.cost)
            );
            if ctx.timing {
                row.push_str(&format!(",{solver_us},{oracle_us}"));
            }
            crate::out(&format!("{row}\n"));
        }
    }
    if !all_ok {
        eprintln!("some rows disagree with the oracle");
    }
    Ok(Exit::Ok)
}
