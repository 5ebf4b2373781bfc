//! Machine-readable report rendering.
//!
//! The schema is versioned with a top-level `"v": 1`. Output depends only
//! on the results and the seed, so identical invocations render
//! byte-identical documents.

use serde::Serialize;

use kimlab_core::scenarios::ScenarioResult;

#[derive(Serialize)]
struct Document<'a> {
    v: u32,
    seed: u64,
    pass: bool,
    scenarios: Vec<Scenario<'a>>,
}

#[derive(Serialize)]
struct Scenario<'a> {
    scenario: &'a str,
    pass: bool,
    checks: Vec<CheckOut<'a>>,
}

#[derive(Serialize)]
struct CheckOut<'a> {
    name: &'a str,
    claim: &'a str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
}

pub fn render_json(seed: u64, results: &[ScenarioResult]) -> String {
    let doc = Document {
        v: 1,
        seed,
        pass: results.iter().all(|r| r.pass()),
        scenarios: results
            .iter()
            .map(|r| Scenario {
                scenario: &r.scenario,
                pass: r.pass(),
                checks: r
                    .report
                    .checks
                    .iter()
                    .map(|c| CheckOut {
                        name: &c.name,
                        claim: &c.claim,
                        pass: c.pass,
                        witness: c.witness.as_deref(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("report serialization cannot fail")
}
