//! User edits to the function under analysis. An edit replaces one region
//! (precondition, postcondition, body), appends behaviors, or replaces the
//! whole source, and is accepted only if the result still validates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{AnnotatedProgram, BehaviorBlock, NamedPredicate};
use super::parser::{parse_behaviors, parse_clauses, parse_statements};
use super::pretty::pretty_print;
use super::validate::{has_errors, validate, Diagnostic};
use super::{load_program, syntax_diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EditKind {
    #[serde(rename = "pre")]
    Pre,
    #[serde(rename = "post")]
    Post,
    #[serde(rename = "body")]
    Body,
    #[serde(rename = "behaviors-append")]
    BehaviorsAppend,
    #[serde(rename = "full-source")]
    FullSource,
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditKind::Pre => "pre",
            EditKind::Post => "post",
            EditKind::Body => "body",
            EditKind::BehaviorsAppend => "behaviors-append",
            EditKind::FullSource => "full-source",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub kind: EditKind,
    pub text: String,
}

impl Edit {
    pub fn new(kind: EditKind, text: impl Into<String>) -> Self {
        Edit {
            kind,
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Edited {
    pub program: AnnotatedProgram,
    pub source: String,
    pub warnings: Vec<Diagnostic>,
}

/// Applies `edit` to the entry function of `program`. The input is never
/// modified; on failure the diagnostics describe why.
pub fn apply_edit(program: &AnnotatedProgram, edit: &Edit) -> Result<Edited, Vec<Diagnostic>> {
    if edit.kind == EditKind::FullSource {
        let (program, warnings) = load_program(&edit.text)?;
        return Ok(Edited {
            program,
            source: edit.text.clone(),
            warnings,
        });
    }

    let mut next = program.clone();
    let f = next.entry_function_mut();
    let empty = edit.text.trim().is_empty();
    match edit.kind {
        EditKind::Pre | EditKind::Post => {
            let slot = if edit.kind == EditKind::Pre {
                &f.pre
            } else {
                &f.post
            };
            let new = if empty {
                None
            } else {
                let (name, clauses) =
                    parse_clauses(&edit.text).map_err(|e| vec![syntax_diagnostic(&e)])?;
                let name = name
                    .or_else(|| slot.as_ref().map(|p| p.name.clone()))
                    .unwrap_or_else(|| f.spec_name());
                Some(NamedPredicate { name, clauses })
            };
            if edit.kind == EditKind::Pre {
                f.pre = new;
            } else {
                f.post = new;
            }
        }
        EditKind::Body => {
            f.body = if empty {
                Vec::new()
            } else {
                parse_statements(&edit.text).map_err(|e| vec![syntax_diagnostic(&e)])?
            };
        }
        EditKind::BehaviorsAppend => {
            let (name, behaviors) =
                parse_behaviors(&edit.text).map_err(|e| vec![syntax_diagnostic(&e)])?;
            match (name, f.behavior_blocks.last_mut()) {
                (None, Some(block)) => block.behaviors.extend(behaviors),
                (name, _) => {
                    let name = name.unwrap_or_else(|| f.spec_name());
                    if let Some(block) = f.behavior_blocks.iter_mut().find(|b| b.name == name) {
                        block.behaviors.extend(behaviors);
                    } else {
                        f.behavior_blocks.push(BehaviorBlock { name, behaviors });
                    }
                }
            }
        }
        EditKind::FullSource => unreachable!("handled above"),
    }

    let diags = validate(&next);
    if has_errors(&diags) {
        return Err(diags.into_iter().filter(Diagnostic::is_error).collect());
    }
    Ok(Edited {
        source: pretty_print(&next),
        program: next,
        warnings: diags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse_program;

    const SRC: &str = "int f(int x) { @behavior s { good { input={x=1} output={rv=1} } } return x; }";

    #[test]
    fn pre_edit_keeps_spec_name() {
        let p = parse_program(SRC).unwrap();
        let out = apply_edit(&p, &Edit::new(EditKind::Pre, "x > 0")).unwrap();
        let f = out.program.entry_function();
        assert_eq!(f.pre.as_ref().unwrap().name, "s");
        assert!(out.source.contains("@pre s {"), "{}", out.source);
        assert_eq!(parse_program(&out.source).unwrap(), out.program);
    }

    #[test]
    fn failed_edit_reports_and_leaves_input() {
        let p = parse_program(SRC).unwrap();
        let before = p.clone();
        let err = apply_edit(&p, &Edit::new(EditKind::Post, "rv = y")).unwrap_err();
        assert!(err[0].message.contains("`y`"));
        assert_eq!(p, before);
        let err = apply_edit(&p, &Edit::new(EditKind::Body, "return (;")).unwrap_err();
        assert_eq!(err.len(), 1);
    }

    #[test]
    fn append_grows_last_block() {
        let p = parse_program(SRC).unwrap();
        let out = apply_edit(
            &p,
            &Edit::new(
                EditKind::BehaviorsAppend,
                "bad { input={x=2} output={rv=3} } good { input={x=2} output={rv=2} }",
            ),
        )
        .unwrap();
        assert_eq!(out.program.entry_function().behavior_count(), 3);
        assert_eq!(out.program.entry_function().behavior_blocks.len(), 1);
    }

    #[test]
    fn empty_text_removes_predicate() {
        let p = parse_program(SRC).unwrap();
        let out = apply_edit(&p, &Edit::new(EditKind::Pre, "x > 0")).unwrap();
        let out = apply_edit(&out.program, &Edit::new(EditKind::Pre, "  ")).unwrap();
        assert!(out.program.entry_function().pre.is_none());
    }

    #[test]
    fn edit_kind_json_names() {
        let e: Edit = serde_json::from_str(r#"{"kind":"behaviors-append","text":""}"#).unwrap();
        assert_eq!(e.kind, EditKind::BehaviorsAppend);
    }
}
