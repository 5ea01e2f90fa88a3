//! The session language: parser, printer, runner and report serializer.

pub mod catalog;
pub mod parse;
pub mod run;
pub mod session;

pub use parse::parse_session;
pub use run::{emit_report, run_session, DirectiveOutcome, Format, SessionRun};
pub use session::{Check, Decl, Directive, GenMetricSpec, Object, Session, Via, PRODUCTIONS};
