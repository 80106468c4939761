//! Holds the `acceptance` integration target in `tests/`. It lives in its own
//! package so that `cargo test --workspace` runs it after every other suite.
