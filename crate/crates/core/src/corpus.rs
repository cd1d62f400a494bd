//! Example programs bundled with the crate.

use crate::lang::EditKind;

pub const LINEAR_SEARCH_INTERFACE: &str = include_str!("../corpus/linear_search_interface.sc");
/// No body and no specification, seven labeled pairs.
pub const LINEAR_SEARCH_TRACE: &str = include_str!("../corpus/linear_search_trace.sc");
/// Matured specification with a body that breaks instead of returning.
pub const LINEAR_SEARCH_ANNOTATED: &str = include_str!("../corpus/linear_search_annotated.sc");
/// Rightmost-match specification and body, plus a reference function.
pub const LINEAR_SEARCH_FINAL: &str = include_str!("../corpus/linear_search_final.sc");
pub const LINEAR_SEARCH_PRE_PAIR4: &str = include_str!("../corpus/linear_search_pre_pair4.sc");
pub const LINEAR_SEARCH_PRE_PAIR6: &str = include_str!("../corpus/linear_search_pre_pair6.sc");
/// Domain for accuracy checks of the linear search specifications.
pub const LINEAR_SEARCH_DOMAIN: &str = include_str!("../corpus/linear_search.domain.json");
pub const SORTED_SEARCH: &str = include_str!("../corpus/sorted_search.sc");
pub const BINARY_SEARCH: &str = include_str!("../corpus/binary_search.sc");
pub const JUSTIFY_SAME_WORDS: &str = include_str!("../corpus/justify_same_words.sc");

/// Every bundled program, by file name.
pub const PROGRAMS: [(&str, &str); 9] = [
    ("linear_search_interface.sc", LINEAR_SEARCH_INTERFACE),
    ("linear_search_trace.sc", LINEAR_SEARCH_TRACE),
    ("linear_search_annotated.sc", LINEAR_SEARCH_ANNOTATED),
    ("linear_search_final.sc", LINEAR_SEARCH_FINAL),
    ("linear_search_pre_pair4.sc", LINEAR_SEARCH_PRE_PAIR4),
    ("linear_search_pre_pair6.sc", LINEAR_SEARCH_PRE_PAIR6),
    ("sorted_search.sc", SORTED_SEARCH),
    ("binary_search.sc", BINARY_SEARCH),
    ("justify_same_words.sc", JUSTIFY_SAME_WORDS),
];

/// Body edits used in the linear search walkthrough.
pub mod bodies {
    pub const LEFT_TO_RIGHT: &str = "int i = l;
while (i <= r) {
    if (a[i] == e)
        return i;
    i++;
}
return -1;";

    pub const RIGHT_TO_LEFT: &str = "int i = r;
while (i >= l) {
    if (a[i] == e)
        return i;
    i--;
}
return -1;";
}

/// The edits a developer makes while stepping through
/// [`LINEAR_SEARCH_TRACE`]: after the verdicts for behavior `after`, apply
/// `edits` in order.
pub struct ScriptedEdit {
    pub after: usize,
    pub edits: &'static [(EditKind, &'static str)],
}

pub const LINEAR_SEARCH_TRACE_EDITS: [ScriptedEdit; 5] = [
    ScriptedEdit {
        after: 0,
        edits: &[(EditKind::Pre, "l <= r")],
    },
    ScriptedEdit {
        after: 2,
        edits: &[(EditKind::Post, "(rv != -1) => a[rv] = e")],
    },
    ScriptedEdit {
        after: 3,
        edits: &[(
            EditKind::Post,
            "(rv != -1) => a[rv] = e; (rv = -1) => forall int k:[0 .. a.size - 1] (e != a[k])",
        )],
    },
    ScriptedEdit {
        after: 5,
        edits: &[(
            EditKind::Post,
            "(rv != -1) => l <= rv <= r && a[rv] = e; (rv = -1) => forall int k:[l .. r] (e != a[k])",
        )],
    },
    ScriptedEdit {
        after: 6,
        edits: &[
            (EditKind::Pre, "0 <= l <= r < a.size"),
            (
                EditKind::Post,
                "0 <= l <= r < a.size; (rv != -1) => l <= rv <= r && a[rv] = e; \
                 (rv = -1) => forall int k:[l .. r] (e != a[k])",
            ),
        ],
    },
];

/// Action summaries, precondition then postcondition, for each behavior of
/// [`LINEAR_SEARCH_TRACE`] when stepped with [`LINEAR_SEARCH_TRACE_EDITS`].
pub const LINEAR_SEARCH_TRACE_EXPECTED: [(&str, &str); 7] = [
    ("Weaken(P)", "Skip"),
    ("Skip", "Skip"),
    ("Skip", "Strengthen(Q)"),
    ("Skip", "Strengthen(Q)"),
    ("Skip", "Skip"),
    ("Skip", "Weaken(Q)"),
    ("Skip", "MakeWellDefined(Q)"),
];
