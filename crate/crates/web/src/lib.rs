//! WebAssembly bindings for the browser demo.
//!
//! Every export takes the channel JSON wire format and returns a JSON
//! document. Failures come back as `{"error": "..."}` so the page never has
//! to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use secrecy_region::channel::{is_secrecy_feasible, rate_scale, spectrum};
use secrecy_region::export::round_sig12;
use secrecy_region::regions::{capacity_region_with, equal_rate_gap, max_rates_from, time_sharing_from};
use secrecy_region::sato::{outer_region, tightness_rho, CovSearchConfig};
use secrecy_region::{ChannelPair, Complex64, RatePair, Result, SweepConfig};

fn respond(r: Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

fn points(ps: &[RatePair]) -> Value {
    ps.iter().map(|p| json!([round_sig12(p.r1), round_sig12(p.r2)])).collect()
}

/// Eigenvalues, single-user secrecy capacities and the tightness correlation.
#[wasm_bindgen]
pub fn spectrum_json(channel: &str) -> String {
    respond((|| {
        let ch = ChannelPair::from_json(channel)?;
        let s = spectrum(&ch)?;
        let caps = max_rates_from(&ch, &s);
        let (u1, u2) = is_secrecy_feasible(&ch, 1e-12)?;
        let rho = tightness_rho(&s, ch.h(), ch.g()).ok();
        Ok(json!({
            "lambda1": round_sig12(s.lambda1),
            "lambda2": round_sig12(s.lambda2),
            "r1_max_bits": round_sig12(caps.r1),
            "r2_max_bits": round_sig12(caps.r2),
            "rate_scale": rate_scale(&ch),
            "feasible": { "user1": u1, "user2": u2 },
            "rho_star": rho.map(|z| [round_sig12(z.re), round_sig12(z.im)]),
        }))
    })())
}

/// Capacity region frontier, the time-sharing line and their equal-rate gap.
#[wasm_bindgen]
pub fn region_json(channel: &str, grid: usize) -> String {
    respond((|| {
        let ch = ChannelPair::from_json(channel)?;
        let s = spectrum(&ch)?;
        let cfg = SweepConfig { grid, ..SweepConfig::default() };
        let region = capacity_region_with(&ch, &s, &cfg)?;
        let ts = time_sharing_from(max_rates_from(&ch, &s));
        Ok(json!({
            "capacity": points(&region.hull),
            "time_sharing": points(&ts.hull),
            "equal_rate_gap_bits": round_sig12(equal_rate_gap(&region, &ts)),
            "corners": region.points.len(),
        }))
    })())
}

/// Outer-bound region for a fixed noise correlation `rho`, coarse search.
#[wasm_bindgen]
pub fn outer_json(channel: &str, rho_re: f64, rho_im: f64) -> String {
    respond((|| {
        let ch = ChannelPair::from_json(channel)?;
        let outer = outer_region(&ch, Complex64::new(rho_re, rho_im), &CovSearchConfig::coarse())?;
        Ok(json!({ "rho": [rho_re, rho_im], "outer": points(&outer.hull) }))
    })())
}

