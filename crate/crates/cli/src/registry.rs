//! Library operations and the command that exposes each of them.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Operation {
    pub module: &'static str,
    pub name: &'static str,
    pub command: &'static str,
}

const fn op(module: &'static str, name: &'static str, command: &'static str) -> Operation {
    Operation { module, name, command }
}

pub const OPERATIONS: &[Operation] = &[
    op("metric-core", "validate_space", "validate"),
    op("metric-core", "check_morphism", "morphism"),
    op("metric-core", "l_infty_product", "product"),
    op("metric-core", "fiber_product", "fiber-product"),
    op("metric-core", "colimit_glue", "colimit"),
    op("metric-core", "quotient_by_group", "quotient-group"),
    op("metric-core", "metric_identification", "identify"),
    op("submetry", "hausdorff_distance", "hausdorff"),
    op("submetry", "submetry_check", "submetry"),
    op("submetry", "proper_family_check", "proper"),
    op("submetry", "hyperspace", "hyperspace"),
    op("submetry", "map_to_family", "map-to-family"),
    op("submetry", "family_to_map", "family-to-map"),
    op("submetry", "pointed_pullback", "pointed-pullback"),
    op("submetry", "diagonal_family", "diagonal-family"),
    op("lsm-descent", "local_submetry_radius", "lsm-radius"),
    op("lsm-descent", "lsm_covering_check", "lsm-check"),
    op("lsm-descent", "covering_from_submetry", "covering-from-submetry"),
    op("lsm-descent", "covering_pullback", "covering-pullback"),
    op("lsm-descent", "covering_compose", "covering-compose"),
    op("lsm-descent", "glue_morphisms", "glue-morphisms"),
    op("lsm-descent", "check_cocycle", "cocycle"),
    op("lsm-descent", "glue_descent", "glue-descent"),
    op("gromov-hausdorff", "distortion", "distortion"),
    op("gromov-hausdorff", "gh_exact", "gh"),
    op("gromov-hausdorff", "gh_enum_oracle", "gh-oracle"),
    op("gromov-hausdorff", "glue_over_two_points", "glue-2r"),
    op("gromov-hausdorff", "correspondence_from_family", "corr-from-family"),
    op("gromov-hausdorff", "chain_upper_bound", "chain-bound"),
];

/// Commands outside the operation table.
pub const UTILITY_COMMANDS: &[&str] = &["generate"];

pub fn lookup(command: &str) -> Option<&'static Operation> {
    OPERATIONS.iter().find(|o| o.command == command)
}
