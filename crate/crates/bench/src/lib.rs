//! Shared benchmark fixtures.

use dilation_cli::{emit_instance, generate_instance, parse_instance, GenModel, ParsedInstance};

/// A uniform-square instance routed through the text format, so benchmarks
/// measure exactly what the CLI would run on.
pub fn uniform_instance(n: usize, seed: u64) -> ParsedInstance {
    let text = emit_instance(&generate_instance(GenModel::UniformSquare, n, seed));
    parse_instance(&text).expect("generated instances are valid")
}
