//! Exhaustive agreement between the configuration calculus and brute-force
//! equivalence classes, for every small structure.

mod common;

use common::{sizes, KINDS};

#[test]
fn enter_exit_and_classes_match_the_oracle() {
    for kind in KINDS {
        for n in sizes(kind) {
            common::check_enter_exit(kind, n);
        }
    }
}

#[test]
fn termination_matches_class_membership() {
    for kind in KINDS {
        for n in sizes(kind) {
            common::check_termination(kind, n);
        }
    }
}

#[test]
fn hall_insertion_case_from_the_worked_example() {
    common::check_hall_insertion_example();
}

#[test]
fn resolvers_deliver_what_queries_promise() {
    for kind in KINDS {
        for n in sizes(kind).filter(|&n| n <= 5) {
            common::check_resolvers(kind, n);
        }
    }
}
