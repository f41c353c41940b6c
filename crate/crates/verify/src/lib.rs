//! Acceptance checks for `curvedflat`; see `tests/acceptance.rs`.
