//! Built-in isomorphism-invariant properties for
//! [`indsub_property_param`](super::indsub_property_param).

use crate::graph::{is_isomorphic, Graph};

pub fn always_true(_: &Graph) -> bool {
    true
}

pub fn connected(g: &Graph) -> bool {
    g.is_connected()
}

pub fn isomorphic_to(target: Graph) -> impl Fn(&Graph) -> bool + Send + Sync {
    move |g| is_isomorphic(g, &target)
}
