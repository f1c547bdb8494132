//! Hamilton cycles in sparse random graphs, with endpoint families that
//! steer around low-degree vertices.

use crate::closing::{find_hamilton_cycle, HamiltonOptions, HamiltonOutcome, SearchFailure, SearchStats, Stage};
use crate::graph::Graph;
use crate::rotation::{EndpointSource, SmallAwareParams};

/// `options` with the double rotation fed by [`crate::rotation::small_aware_family`].
/// `params` defaults to [`SmallAwareParams::defaults`].
pub fn small_aware_options(n: usize, options: &HamiltonOptions, params: Option<SmallAwareParams>) -> HamiltonOptions {
    let mut o = options.clone();
    o.faithful.source = Some(EndpointSource::SmallAware {
        params: params.unwrap_or_else(|| SmallAwareParams::defaults(n)),
    });
    o
}

/// Fails at once, at [`Stage::Precheck`], when `g` is disconnected.
pub fn gnp_hamilton_schedule(
    g: &Graph,
    options: &HamiltonOptions,
    params: Option<SmallAwareParams>,
) -> Result<HamiltonOutcome, SearchFailure> {
    if !g.is_connected() {
        return Err(SearchFailure {
            stage: Stage::Precheck,
            stats: SearchStats::default(),
        });
    }
    find_hamilton_cycle(g, &small_aware_options(g.n(), options, params))
}
