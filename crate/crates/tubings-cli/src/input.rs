//! Reading JSON arguments: `-` is stdin, text starting with `{` or `[` is
//! inline JSON, anything else a file path. Graph arguments also accept the
//! presets `K<n>`, `L<n>`, `Cy<n>` and `E<n>` when no such file exists.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use tubings_core::{Graph, NodeSet};

use crate::CliError;

fn read_source(arg: &str) -> Result<(String, String), CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        return Ok(("<stdin>".into(), s));
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    fs::read_to_string(arg)
        .map(|s| (arg.to_string(), s))
        .map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

/// Parses JSON, reporting line and column on failure.
pub fn parse_json<T: DeserializeOwned>(origin: &str, text: &str) -> Result<T, CliError> {
    // serde_json's message already ends with "at line L column C".
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: malformed input: {e}")))
}

pub fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let (origin, text) = read_source(arg)?;
    parse_json(&origin, &text)
}

/// `K3`, `L4`, `Cy5`, `E2`.
pub fn preset(name: &str) -> Option<Result<Graph, CliError>> {
    let (kind, digits) = if let Some(d) = name.strip_prefix("Cy") {
        ("Cy", d)
    } else {
        let mut chars = name.chars();
        let k = chars.next()?;
        (&name[..k.len_utf8()], chars.as_str())
    };
    let n: usize = digits.parse().ok()?;
    if n == 0 {
        return Some(Err(CliError::Input(format!("{name}: a graph needs at least one node"))));
    }
    let g = match kind {
        "K" => Graph::complete(n),
        "L" => Graph::linear(n),
        "Cy" => {
            if n < 3 {
                return Some(Err(CliError::Input(format!("{name}: cycles need at least 3 nodes"))));
            }
            Graph::cycle(n)
        }
        "E" => Graph::edgeless(n),
        _ => return None,
    };
    Some(Ok(g))
}

pub fn read_graph(arg: &str) -> Result<Graph, CliError> {
    if arg != "-" && !Path::new(arg).exists() {
        if let Some(g) = preset(arg) {
            return g;
        }
    }
    read_json(arg)
}

/// A comma-separated node list such as `1,3,4,6`.
pub fn parse_tube(text: &str) -> Result<NodeSet, CliError> {
    let nodes = text
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|part| {
            part.parse::<usize>()
                .map_err(|_| CliError::Input(format!("tube {text:?}: {part:?} is not a node index")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    tube_from_list(&nodes).map_err(|CliError::Input(m)| CliError::Input(format!("tube {text:?}: {m}")))
}

pub fn tube_from_list(nodes: &[usize]) -> Result<NodeSet, CliError> {
    let mut s = NodeSet::EMPTY;
    for &v in nodes {
        if v == 0 || v > tubings_core::nodeset::MAX_NODES {
            return Err(CliError::Input(format!("node {v} out of range")));
        }
        if s.contains(v) {
            return Err(CliError::Input(format!("node {v} repeated")));
        }
        s = s.with(v);
    }
    if s.is_empty() {
        return Err(CliError::Input("empty tube".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(preset("K3").unwrap().unwrap(), Graph::complete(3));
        assert_eq!(preset("L4").unwrap().unwrap(), Graph::linear(4));
        assert_eq!(preset("Cy4").unwrap().unwrap(), Graph::cycle(4));
        assert_eq!(preset("E2").unwrap().unwrap(), Graph::edgeless(2));
        assert!(preset("Cy2").unwrap().is_err());
        assert!(preset("graph.json").is_none());
        assert!(preset("Q3").is_none());
    }

    #[test]
    fn tubes_parse() {
        assert_eq!(parse_tube("1,3, 4,6").unwrap(), NodeSet::from_nodes([1, 3, 4, 6]));
        assert!(parse_tube("1,1").is_err());
        assert!(parse_tube("0").is_err());
        assert!(parse_tube("").is_err());
        assert!(parse_tube("a").is_err());
    }

    #[test]
    fn json_errors_carry_position() {
        let err = parse_json::<Graph>("x", "{\"n\": 3,\n \"edges\": [[1,2]").unwrap_err();
        let CliError::Input(msg) = err;
        assert!(msg.contains("line 2"), "{msg}");
    }
}
