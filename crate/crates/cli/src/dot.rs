//! Graphviz export.

use std::fmt::Write;

use dercat_core::{Correspondence, FinCat, Marking, Mor};

pub enum Entity<'a> {
    Category {
        name: &'a str,
        cat: &'a FinCat,
        /// Edges to draw; all non-identity morphisms when absent.
        edges: Option<&'a [Mor]>,
        marking: Option<&'a Marking>,
    },
    Correspondence {
        name: &'a str,
        correspondence: &'a Correspondence,
        marking: Option<&'a Marking>,
    },
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn body(out: &mut String, cat: &FinCat, degrees: Option<&[usize]>, edges: &[Mor], marking: Option<&Marking>) {
    for x in cat.objects() {
        match degrees {
            Some(d) => writeln!(out, "  n{x} [label={}, xlabel=\"{}\"];", quote(cat.object_name(x)), d[x]).unwrap(),
            None => writeln!(out, "  n{x} [label={}];", quote(cat.object_name(x))).unwrap(),
        }
    }
    for &m in edges {
        let style = if marking.is_some_and(|w| w.contains(m)) { ", style=bold, color=red" } else { "" };
        writeln!(out, "  n{} -> n{} [label={}{style}];", cat.src(m), cat.tgt(m), quote(cat.morphism_name(m))).unwrap();
    }
}

/// Deterministic DOT text for a category or correspondence.
pub fn export_dot(entity: &Entity) -> String {
    let mut out = String::new();
    match entity {
        Entity::Category { name, cat, edges, marking } => {
            writeln!(out, "digraph {} {{", quote(name)).unwrap();
            out.push_str("  rankdir=LR;\n");
            let all: Vec<Mor> = cat.morphisms().filter(|&m| !cat.is_identity(m)).collect();
            body(&mut out, cat, None, edges.unwrap_or(&all), *marking);
        }
        Entity::Correspondence { name, correspondence: x, marking } => {
            writeln!(out, "digraph {} {{", quote(name)).unwrap();
            out.push_str("  rankdir=LR;\n");
            let t = x.total();
            let all: Vec<Mor> = t.morphisms().filter(|&m| !t.is_identity(m)).collect();
            body(&mut out, t, Some(x.degrees()), &all, *marking);
        }
    }
    out.push_str("}\n");
    out
}
