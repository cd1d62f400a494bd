//! Refinement sessions.
//!
//! A session owns the program text, a resumable check over its behaviors,
//! and an append-only event log. The log is the source of truth: replaying
//! it over the initial text rebuilds the session, which is how sessions are
//! saved and loaded.

pub mod batch;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accuracy::{check_program, AccuracyError, AccuracyOptions, AccuracyReport, DomainSpec};
use crate::correction::{CheckError, CorrectionAction, OracleQuery, SpecCheck, Step, Verdict};
use crate::eval::{eval_post_on_behavior, eval_pre_on_behavior, Budget, TriBool};
use crate::lang::{apply_edit, load_program, AnnotatedProgram, BehaviorKind, Diagnostic, Edit};
use crate::value::Valuation;

pub use batch::{run_batch, run_batch_source, BatchOptions, BatchReport, ExitStatus};

/// A specification's truth values on one recorded behavior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BehaviorTruth {
    pub behavior_index: usize,
    pub kind: BehaviorKind,
    pub input: Valuation,
    pub output: Valuation,
    pub p_truth: TriBool,
    pub q_truth: TriBool,
}

/// Version written to, and required of, saved sessions.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("program has errors")]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("the last verdict offers no choice")]
    NoChoicePending,
    #[error("option {option} out of range; the verdict has {available}")]
    InvalidOption { option: usize, available: usize },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("saved session has format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("saved session is corrupt: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Accuracy(#[from] AccuracyError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Settings {
    #[serde(default)]
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PathBuf>,
}

/// One entry of the session log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "camelCase")]
pub enum Event {
    Created { source: String },
    Stepped { step: Step },
    OracleAnswered { answer: bool, verdict: Verdict },
    Edited { edit: Edit },
    #[serde(rename_all = "camelCase")]
    OrChoice {
        behavior_index: usize,
        option: usize,
        action: CorrectionAction,
    },
    Restarted,
}

/// Result of an edit request. On rejection the session is unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EditOutcome {
    pub applied: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Serializable view of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub id: String,
    pub source: String,
    pub entry: String,
    pub spec_only: bool,
    pub behavior_count: usize,
    pub cursor: usize,
    pub at_pre: bool,
    pub pending_query: Option<OracleQuery>,
    pub last_verdict: Option<Verdict>,
    pub warnings: Vec<Diagnostic>,
    pub settings: Settings,
    pub log_len: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SavedSession {
    format_version: u32,
    id: String,
    settings: Settings,
    source: String,
    log: Vec<Event>,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    source: String,
    program: AnnotatedProgram,
    warnings: Vec<Diagnostic>,
    check: SpecCheck,
    last_verdict: Option<Verdict>,
    settings: Settings,
    log: Vec<Event>,
}

impl Session {
    pub fn create(source: &str, settings: Settings) -> Result<Session, SessionError> {
        Self::with_id(uuid::Uuid::new_v4().to_string(), source, settings)
    }

    pub fn with_id(id: String, source: &str, settings: Settings) -> Result<Session, SessionError> {
        let (program, warnings) = load_program(source).map_err(SessionError::Invalid)?;
        Ok(Session {
            id,
            source: source.to_string(),
            program,
            warnings,
            check: SpecCheck::new(settings.budget),
            last_verdict: None,
            settings,
            log: vec![Event::Created {
                source: source.to_string(),
            }],
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn program(&self) -> &AnnotatedProgram {
        &self.program
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn cursor(&self) -> usize {
        self.check.cursor()
    }

    pub fn pending_query(&self) -> Option<&OracleQuery> {
        self.check.pending_query()
    }

    pub fn last_verdict(&self) -> Option<&Verdict> {
        self.last_verdict.as_ref()
    }

    /// True when the entry function has no body, so behaviors are checked
    /// against the specification alone.
    pub fn is_spec_only(&self) -> bool {
        self.program.entry_function().is_spec_only()
    }

    pub fn behavior_count(&self) -> usize {
        self.program.entry_function().behavior_count()
    }

    pub fn log(&self) -> &[Event] {
        &self.log
    }

    pub fn state(&self) -> SessionState {
        SessionState {
            id: self.id.clone(),
            source: self.source.clone(),
            entry: self.program.entry.clone(),
            spec_only: self.is_spec_only(),
            behavior_count: self.behavior_count(),
            cursor: self.cursor(),
            at_pre: self.check.at_pre(),
            pending_query: self.pending_query().cloned(),
            last_verdict: self.last_verdict.clone(),
            warnings: self.warnings.clone(),
            settings: self.settings.clone(),
            log_len: self.log.len(),
        }
    }

    /// Advances to the next pause point.
    pub fn step(&mut self) -> Result<Step, SessionError> {
        let step = self.check.step(&self.program)?;
        if let Step::Verdict(v) = &step {
            self.last_verdict = Some(v.clone());
        }
        self.log.push(Event::Stepped { step: step.clone() });
        Ok(step)
    }

    pub fn answer(&mut self, answer: bool) -> Result<Verdict, SessionError> {
        let verdict = self.check.answer(answer)?;
        self.last_verdict = Some(verdict.clone());
        self.log.push(Event::OracleAnswered {
            answer,
            verdict: verdict.clone(),
        });
        Ok(verdict)
    }

    pub fn apply_edit(&mut self, edit: Edit) -> EditOutcome {
        match apply_edit(&self.program, &edit) {
            Err(diagnostics) => EditOutcome {
                applied: false,
                diagnostics,
            },
            Ok(edited) => {
                self.program = edited.program;
                self.source = edited.source;
                self.warnings = edited.warnings.clone();
                self.check.program_changed();
                self.log.push(Event::Edited { edit });
                EditOutcome {
                    applied: true,
                    diagnostics: edited.warnings,
                }
            }
        }
    }

    /// Picks one disjunct of the last verdict's `Or` action.
    pub fn choose(&mut self, option: usize) -> Result<CorrectionAction, SessionError> {
        let verdict = self.last_verdict.as_ref().ok_or(SessionError::NoChoicePending)?;
        let options = verdict.action.options();
        if options.is_empty() {
            return Err(SessionError::NoChoicePending);
        }
        let action = options.get(option).cloned().ok_or(SessionError::InvalidOption {
            option,
            available: options.len(),
        })?;
        self.log.push(Event::OrChoice {
            behavior_index: verdict.behavior_index,
            option,
            action: action.clone(),
        });
        Ok(action)
    }

    /// Starts over from the first behavior, keeping the current program.
    pub fn restart(&mut self) {
        self.check.restart();
        self.last_verdict = None;
        self.log.push(Event::Restarted);
    }

    /// Accuracy of the current specification over `domain`. Not logged: it
    /// does not change the session.
    pub fn run_accuracy(&self, domain: &DomainSpec, options: AccuracyOptions) -> Result<AccuracyReport, SessionError> {
        Ok(check_program(&self.program, domain, self.settings.budget, options)?)
    }

    /// `P` and `Q` on every behavior's recorded input and output, without
    /// running the body. Not logged.
    pub fn evaluate_behaviors(&self) -> Result<Vec<BehaviorTruth>, SessionError> {
        let budget = self.settings.budget;
        self.program
            .entry_function()
            .behaviors()
            .enumerate()
            .map(|(index, b)| {
                let p = eval_pre_on_behavior(&self.program, b, budget).map_err(CheckError::from)?;
                let q = eval_post_on_behavior(&self.program, b, budget).map_err(CheckError::from)?;
                Ok(BehaviorTruth {
                    behavior_index: index,
                    kind: b.kind,
                    input: b.input.clone(),
                    output: b.output.clone(),
                    p_truth: p.value,
                    q_truth: q.value,
                })
            })
            .collect()
    }

    /// Rebuilds a session by replaying `log`. Recorded step results must
    /// match what the replay produces.
    pub fn replay(id: String, settings: Settings, log: &[Event]) -> Result<Session, SessionError> {
        let corrupt = |msg: String| SessionError::Corrupt(msg);
        let Some(Event::Created { source }) = log.first() else {
            return Err(corrupt("log does not start with a created event".into()));
        };
        let mut s = Session::with_id(id, source, settings)?;
        for (i, event) in log.iter().enumerate().skip(1) {
            match event {
                Event::Created { .. } => return Err(corrupt(format!("event {i}: second created event"))),
                Event::Stepped { step } => {
                    if &s.step()? != step {
                        return Err(corrupt(format!("event {i}: step result differs on replay")));
                    }
                }
                Event::OracleAnswered { answer, verdict } => {
                    if &s.answer(*answer)? != verdict {
                        return Err(corrupt(format!("event {i}: verdict differs on replay")));
                    }
                }
                Event::Edited { edit } => {
                    if !s.apply_edit(edit.clone()).applied {
                        return Err(corrupt(format!("event {i}: edit rejected on replay")));
                    }
                }
                Event::OrChoice { option, .. } => {
                    s.choose(*option)?;
                }
                Event::Restarted => s.restart(),
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let saved = SavedSession {
            format_version: FORMAT_VERSION,
            id: self.id.clone(),
            settings: self.settings.clone(),
            source: self.source.clone(),
            log: self.log.clone(),
        };
        serde_json::to_string_pretty(&saved).expect("sessions serialize")
    }

    pub fn from_json(text: &str) -> Result<Session, SessionError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SessionError::Corrupt(e.to_string()))?;
        let found = value.get("formatVersion").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if found != FORMAT_VERSION {
            return Err(SessionError::VersionMismatch {
                found,
                expected: FORMAT_VERSION,
            });
        }
        let saved: SavedSession = serde_json::from_value(value).map_err(|e| SessionError::Corrupt(e.to_string()))?;
        let s = Session::replay(saved.id, saved.settings, &saved.log)?;
        if s.source != saved.source {
            return Err(SessionError::Corrupt("replayed source differs from saved source".into()));
        }
        Ok(s)
    }

    pub fn save(&self, path: &Path) -> Result<(), SessionError> {
        std::fs::write(path, self.to_json()).map_err(|source| SessionError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Session, SessionError> {
        let text = std::fs::read_to_string(path).map_err(|source| SessionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lang::EditKind;

    fn verdict(step: Step) -> Verdict {
        match step {
            Step::Verdict(v) => v,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn create_and_first_step() {
        let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
        assert!(s.is_spec_only());
        assert_eq!(s.behavior_count(), 7);
        assert!(matches!(s.log()[0], Event::Created { .. }));
        let v = verdict(s.step().unwrap());
        assert_eq!(v.action.summary(), "Weaken(P)");
        let v = verdict(s.step().unwrap());
        assert_eq!(v.action.summary(), "Skip");
    }

    #[test]
    fn malformed_source_is_rejected() {
        match Session::create("int f(int x) { return x", Settings::default()) {
            Err(SessionError::Invalid(d)) => assert!(d[0].is_error()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn edit_resumes_current_behavior() {
        let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
        assert_eq!(verdict(s.step().unwrap()).action.summary(), "Weaken(P)");
        assert!(s.apply_edit(Edit::new(EditKind::Pre, "l <= r")).applied);
        let pre = verdict(s.step().unwrap());
        let post = verdict(s.step().unwrap());
        assert_eq!(pre.behavior_index, 0);
        assert_eq!((pre.action.summary(), post.action.summary()), ("Skip".into(), "Skip".into()));
    }

    #[test]
    fn failed_edit_changes_nothing() {
        let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
        s.step().unwrap();
        let before = s.state();
        let out = s.apply_edit(Edit::new(EditKind::Pre, "l <= q"));
        assert!(!out.applied);
        assert!(out.diagnostics[0].is_error());
        assert_eq!(s.state(), before);
    }

    #[test]
    fn choices_need_an_or() {
        let mut s = Session::create(corpus::SORTED_SEARCH, Settings::default()).unwrap();
        assert!(matches!(s.choose(0), Err(SessionError::NoChoicePending)));
        s.step().unwrap();
        let Step::Query(_) = s.step().unwrap() else { panic!() };
        let v = s.answer(false).unwrap();
        assert_eq!(v.action.summary(), "Or(Strengthen(P), ReviseImpl)");
        assert!(matches!(s.choose(2), Err(SessionError::InvalidOption { option: 2, available: 2 })));
        assert_eq!(s.choose(1).unwrap().summary(), "ReviseImpl");
        assert!(matches!(s.answer(true), Err(SessionError::Check(CheckError::NoPendingQuery))));
    }

    #[test]
    fn save_and_load() {
        let mut s = Session::create(corpus::LINEAR_SEARCH_ANNOTATED, Settings::default()).unwrap();
        s.step().unwrap();
        s.step().unwrap();
        s.step().unwrap();
        let Step::Query(_) = s.step().unwrap() else { panic!() };
        let text = s.to_json();
        let mut back = Session::from_json(&text).unwrap();
        assert_eq!(back.state(), s.state());
        assert_eq!(back.log(), s.log());
        assert_eq!(back.answer(false).unwrap(), s.answer(false).unwrap());

        let future = text.replace("\"formatVersion\": 1", "\"formatVersion\": 2");
        assert!(matches!(
            Session::from_json(&future),
            Err(SessionError::VersionMismatch { found: 2, expected: 1 })
        ));
    }
}
