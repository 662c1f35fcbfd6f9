//! Graph and graphon inputs: edge-list paths or generator expressions.

use std::path::Path;

use graphon_core::edgelist::parse_edge_list;
use graphon_core::graphon::compact_canonical_graphon;
use graphon_core::{Graph, GraphonSpec};

use crate::error::{CliError, Result};

/// A graph, or a generalized graphon given by name.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Graph(Graph),
    Graphon(GraphonSpec<f64>),
}

fn number<T: std::str::FromStr>(input: &str, field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| CliError::input(input, format!("cannot parse {field:?} as a number")))
}

fn args<'a>(input: &str, parts: &'a [&'a str], want: usize) -> Result<&'a [&'a str]> {
    if parts.len() != want + 1 {
        return Err(CliError::input(input, format!("{} takes {want} argument(s)", parts[0])));
    }
    Ok(&parts[1..])
}

/// Parses `complete:N`, `path:N`, `star:L`, `empty:N`, `celebrity:N:ALPHA`,
/// `celebrity_limit`, `constant_box:P:SIDE` and `rank_one_exp:C:DECAY`;
/// anything else is read as an edge-list path.
pub fn parse_input(input: &str) -> Result<Input> {
    if input.is_empty() {
        return Err(CliError::input(input, "no input given"));
    }
    let parts: Vec<&str> = input.split(':').collect();
    let graph = |g: graphon_core::Result<Graph>| -> Result<Input> { Ok(Input::Graph(g?)) };
    match parts[0] {
        "complete" => graph(Ok(Graph::complete(number(input, args(input, &parts, 1)?[0])?))),
        "path" => graph(Ok(Graph::path(number(input, args(input, &parts, 1)?[0])?))),
        "star" => graph(Ok(Graph::star(number(input, args(input, &parts, 1)?[0])?))),
        "empty" => graph(Ok(Graph::empty(number(input, args(input, &parts, 1)?[0])?))),
        "celebrity" => {
            let a = args(input, &parts, 2)?;
            graph(Graph::celebrity(number(input, a[0])?, number(input, a[1])?))
        }
        "celebrity_limit" => {
            args(input, &parts, 0)?;
            Ok(Input::Graphon(GraphonSpec::CelebrityLimit))
        }
        "constant_box" => {
            let a = args(input, &parts, 2)?;
            Ok(Input::Graphon(GraphonSpec::constant_box(number(input, a[0])?, number(input, a[1])?)?))
        }
        "rank_one_exp" => {
            let a = args(input, &parts, 2)?;
            Ok(Input::Graphon(GraphonSpec::rank_one_exp(number(input, a[0])?, number(input, a[1])?)?))
        }
        _ => {
            let path = Path::new(input);
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(Input::Graph(parse_edge_list(&text)?))
        }
    }
}

pub fn parse_graph(input: &str) -> Result<Graph> {
    match parse_input(input)? {
        Input::Graph(g) => Ok(g),
        Input::Graphon(_) => Err(CliError::input(input, "expected a graph, got a graphon")),
    }
}

impl Input {
    /// The graphon of the input; graphs map to their canonical graphon.
    pub fn to_spec(&self) -> Result<GraphonSpec<f64>> {
        Ok(match self {
            Input::Graph(g) => GraphonSpec::Step(compact_canonical_graphon(g)?),
            Input::Graphon(w) => w.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(parse_graph("complete:5").unwrap().edge_count(), 10);
        assert_eq!(parse_graph("celebrity:100:0.5").unwrap(), Graph::celebrity(100, 0.5).unwrap());
        assert_eq!(parse_input("celebrity_limit").unwrap(), Input::Graphon(GraphonSpec::CelebrityLimit));
        assert!(matches!(parse_input("complete:x"), Err(CliError::Input { .. })));
        assert!(matches!(parse_input("star:1:2"), Err(CliError::Input { .. })));
        assert!(parse_graph("rank_one_exp:1:1").is_err());
    }

    #[test]
    fn missing_file_names_the_path() {
        match parse_input("/no/such/file.txt") {
            Err(CliError::Io { path, .. }) => assert_eq!(path, Path::new("/no/such/file.txt")),
            other => panic!("{other:?}"),
        }
    }
}
