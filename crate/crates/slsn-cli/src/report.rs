use serde::Serialize;
use serde_json::{Map, Value};
use slsn::graph::FeasibilityReport;
use slsn::io::SolutionJson;
use slsn::{Rational, Solution};

/// Integers as JSON numbers when they fit, everything else as `num/den`.
pub fn rat(r: &Rational) -> Value {
    slsn::rational::serialize(r, serde_json::value::Serializer).expect("rationals serialize")
}

#[derive(Serialize)]
pub struct Bracket {
    pub low: Value,
    pub high: Value,
}

/// What every command prints. `cost` is set exactly when the run produced a
/// feasible edge set; `ratio_bound` only when an approximation ran.
#[derive(Serialize, Default)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_bound: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_bracket: Option<Bracket>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub demand_lengths: Vec<Value>,
    #[serde(flatten)]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionJson>,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport { command, ..Default::default() }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.details.insert(key.to_string(), v);
    }

    /// Records the verdict, and the cost only when feasible.
    pub fn feasibility(&mut self, report: &FeasibilityReport, cost: &Rational) {
        let ok = report.feasible();
        self.feasible = Some(ok);
        self.cost = ok.then(|| rat(cost));
        self.demand_lengths = report
            .demands
            .iter()
            .map(|d| d.shortest.as_ref().map_or(Value::Null, rat))
            .collect();
    }

    pub fn attach(&mut self, s: &Solution) {
        self.solution = Some(SolutionJson::from(s));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Aligned `key  value` lines for the top-level scalar fields.
    pub fn to_table(&self) -> String {
        let Value::Object(map) = serde_json::to_value(self).expect("reports serialize") else {
            unreachable!()
        };
        let width = map.keys().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &map {
            let shown = match v {
                Value::String(s) => s.clone(),
                Value::Array(a) if k != "demand_lengths" => format!("[{} entries]", a.len()),
                Value::Object(_) => "{..}".to_string(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<width$}  {shown}\n"));
        }
        out
    }
}
