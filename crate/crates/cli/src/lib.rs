//! Library side of the `pencil` command-line tool: instance files and subcommands.

pub mod commands;
pub mod instance;

pub use instance::{Instance, InstanceFile};

use serde::Serialize;

/// Serialises `value` with `indent` spaces per level; `0` gives compact output.
pub fn to_json<T: Serialize>(value: &T, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(value).expect("serialisable");
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).expect("serialisable");
    String::from_utf8(out).expect("JSON is UTF-8")
}
