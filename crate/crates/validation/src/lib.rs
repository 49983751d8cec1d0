//! Home of the `acceptance` test target, which runs every end-to-end
//! criterion and exits non-zero if any fails. It lives in its own package so
//! that it runs after the unit and integration tests of the other crates.
