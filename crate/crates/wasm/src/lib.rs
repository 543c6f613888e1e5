//! Browser bindings for the recognizer. Three operations, each taking and
//! returning strings so the page needs no generated glue types:
//!
//! - [`recognize_json`]: decide an instance in the text format, returning
//!   the same JSON the CLI emits with `--json` (or `{"error": ...}`);
//! - [`generate`]: a seeded random instance rendered in the text format;
//! - [`check_ordering`]: validate a whitespace-separated vertex ordering
//!   against an instance.
//!
//! The functions are ordinary Rust on non-wasm targets, so the unit tests
//! below run on the host.

use wasm_bindgen::prelude::wasm_bindgen;

fn error_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

/// Parse and decide an instance; returns the recognition outcome as JSON.
#[wasm_bindgen]
pub fn recognize_json(text: &str) -> String {
    match ikg::parse_graph(text) {
        Ok((g, h)) => ikg::recognizer::recognize(&g, &h).to_json().to_string(),
        Err(e) => error_json(e),
    }
}

/// Seeded random instance with `n` vertices, `k` round-robin colors and
/// cross-color edge probability `p`, in the text format.
#[wasm_bindgen]
pub fn generate(n: usize, k: usize, p: f64, seed: u64) -> String {
    if n == 0 || k == 0 || k > n || !(0.0..=1.0).contains(&p) {
        return error_json("expected 0 < k <= n and p in [0, 1]");
    }
    let g = ikg::gen::gen_random(n, k, p, seed);
    ikg::render_graph(&g, &ikg::PatternGraph::complete(k))
}

/// Check a whitespace-separated vertex ordering against an instance.
/// Returns `"OK"` or a one-line description of the first violation.
#[wasm_bindgen]
pub fn check_ordering(graph_text: &str, ordering_text: &str) -> String {
    let (g, h) = match ikg::parse_graph(graph_text) {
        Ok(pair) => pair,
        Err(e) => return format!("error: {}", e),
    };
    let ordering: Result<Vec<u32>, _> = ordering_text.split_whitespace().map(str::parse).collect();
    let ordering = match ordering {
        Ok(v) => v,
        Err(e) => return format!("error: {}", e),
    };
    match ikg::representation::verify_ordering(&g, &h, &ordering) {
        Ok(()) => "OK".to_string(),
        Err(e) => format!("{}", e),
    }
}
