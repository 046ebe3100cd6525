//! Browser bindings. Every export returns the rendered table, or the
//! diagnostic text the command-line tool would print, as an `Err` string.

use kahler_gw::surface_model::{AssemblyOptions, Limits};
use kahler_gw::{Error, SurfaceDescriptor};
use kahler_gw_cli::{assemble_report, cover_table, describe_error, spin_table, OutputFormat};
use wasm_bindgen::prelude::wasm_bindgen;

fn format_of(machine: bool) -> OutputFormat {
    if machine {
        OutputFormat::Machine
    } else {
        OutputFormat::Text
    }
}

fn range(from: u32, to: u32, what: &str) -> Result<std::ops::RangeInclusive<u64>, Error> {
    if from == 0 || from > to {
        return Err(Error::Parse(format!("{what} range needs 1 <= from <= to, got {from}..{to}")));
    }
    Ok(u64::from(from)..=u64::from(to))
}

fn finish(result: Result<String, Error>) -> Result<String, String> {
    result.map_err(|e| describe_error(&e))
}

/// Series of the surface described by `descriptor_json`, truncated at class
/// degree `max_degree` and λ-exponent `max_lambda`.
#[wasm_bindgen]
pub fn assemble(
    descriptor_json: &str,
    max_degree: u32,
    max_lambda: u32,
    conjectural_etale: bool,
    machine: bool,
) -> Result<String, String> {
    finish((|| {
        let descriptor = SurfaceDescriptor::from_json(descriptor_json)?;
        let limits = Limits::new(u64::from(max_degree), i64::from(max_lambda))?;
        assemble_report(descriptor, limits, AssemblyOptions { conjectural_etale }, format_of(machine))
    })())
}

/// Signed cover census of an elliptic fiber whose normal bundle has order `m`
/// and character `(vx, vy)`, for degrees `d_from..=d_to`.
#[wasm_bindgen]
pub fn census_covers(m: u32, vx: u32, vy: u32, d_from: u32, d_to: u32, machine: bool) -> Result<String, String> {
    let v = (u64::from(vx), u64::from(vy));
    finish(range(d_from, d_to, "degree").and_then(|degrees| cover_table(u64::from(m), v, degrees, format_of(machine))))
}

/// Theta-characteristic parity census for genera `h_from..=h_to`.
#[wasm_bindgen]
pub fn census_spin(h_from: u32, h_to: u32, machine: bool) -> Result<String, String> {
    finish(range(h_from, h_to, "genus").and_then(|genera| spin_table(genera, format_of(machine))))
}
