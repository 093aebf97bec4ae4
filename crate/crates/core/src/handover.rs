//! Controller availability, asset control resolution and role switching.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::roster::{AgentId, OwnershipRecord, Roster};

/// Per-run controller availability. Sampled once per run; an offline person
/// is offline for every asset they own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvailabilityMap {
    pub online: BTreeMap<AgentId, bool>,
    pub outage_rate_p: f64,
}

impl AvailabilityMap {
    pub fn all_online(roster: &Roster) -> Self {
        AvailabilityMap {
            online: roster.controllers().into_iter().map(|c| (c.clone(), true)).collect(),
            outage_rate_p: 0.0,
        }
    }

    /// Unknown agents count as online.
    pub fn is_online(&self, id: &AgentId) -> bool {
        self.online.get(id).copied().unwrap_or(true)
    }

    pub fn set(&mut self, id: &AgentId, online: bool) {
        self.online.insert(id.clone(), online);
    }

    /// Offline controllers in id order.
    pub fn offline(&self) -> Vec<AgentId> {
        self.online
            .iter()
            .filter(|(_, &up)| !up)
            .map(|(id, _)| id.clone())
            .collect()
    }
}

/// Each controller independently offline with probability `p`, one draw per
/// controller in roster order.
pub fn sample_availability<R: Rng + ?Sized>(roster: &Roster, p: f64, rng: &mut R) -> AvailabilityMap {
    let p = p.clamp(0.0, 1.0);
    let online = roster
        .controllers()
        .into_iter()
        .map(|c| (c.clone(), !rng.random_bool(p)))
        .collect();
    AvailabilityMap { online, outage_rate_p: p }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlResolution {
    pub asset: AgentId,
    pub controller: Option<AgentId>,
    pub was_switch: bool,
}

/// Primary if online, else the first online backup when switching is
/// enabled, else nobody.
pub fn resolve_controller(
    rec: &OwnershipRecord,
    avail: &AvailabilityMap,
    switching_enabled: bool,
) -> ControlResolution {
    let (controller, was_switch) = if avail.is_online(&rec.primary) {
        (Some(rec.primary.clone()), false)
    } else if switching_enabled {
        match rec.backups.iter().find(|b| avail.is_online(b)) {
            Some(b) => (Some(b.clone()), true),
            None => (None, false),
        }
    } else {
        (None, false)
    };
    ControlResolution {
        asset: rec.asset.clone(),
        controller,
        was_switch,
    }
}

/// Resolutions for every asset, in ownership-table order.
pub fn resolve_all(
    roster: &Roster,
    avail: &AvailabilityMap,
    switching_enabled: bool,
) -> Vec<ControlResolution> {
    roster
        .ownership()
        .map(|rec| resolve_controller(rec, avail, switching_enabled))
        .collect()
}

pub fn role_switches(resolutions: &[ControlResolution]) -> usize {
    resolutions.iter().filter(|r| r.was_switch).count()
}

pub fn unserviceable(resolutions: &[ControlResolution]) -> usize {
    resolutions.iter().filter(|r| r.controller.is_none()).count()
}

/// `n · p_o · (1 − p_b)`.
pub fn expected_switches(n_assets: usize, p_o: f64, p_b: f64) -> f64 {
    n_assets as f64 * p_o * (1.0 - p_b)
}

/// Probability an asset stays controllable, assuming independent outages.
pub fn serviceability(p_o: f64, p_b: f64) -> f64 {
    1.0 - p_o * p_b
}

/// `n · p_o · p_b`.
pub fn expected_unserviceable(n_assets: usize, p_o: f64, p_b: f64) -> f64 {
    n_assets as f64 * p_o * p_b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::build_default_roster;
    use crate::rng::{Substreams, AVAILABILITY};

    fn hab01(r: &Roster) -> OwnershipRecord {
        r.ownership_of(&"HAB_01".into()).unwrap().clone()
    }

    #[test]
    fn extreme_rates() {
        let r = build_default_roster();
        let mut rng = Substreams::new(1).stream(AVAILABILITY);
        let a = sample_availability(&r, 0.0, &mut rng);
        assert!(a.online.values().all(|&v| v));
        let a = sample_availability(&r, 1.0, &mut rng);
        assert!(a.online.values().all(|&v| !v));
        assert_eq!(a.online.len(), r.controllers().len());
    }

    #[test]
    fn resolution_cases() {
        let r = build_default_roster();
        let rec = hab01(&r);
        let mut a = AvailabilityMap::all_online(&r);

        let res = resolve_controller(&rec, &a, true);
        assert_eq!(res.controller, Some("LSS_05".into()));
        assert!(!res.was_switch);

        a.set(&"LSS_05".into(), false);
        let res = resolve_controller(&rec, &a, true);
        assert_eq!(res.controller, Some("LSS_01".into()));
        assert!(res.was_switch);

        let res = resolve_controller(&rec, &a, false);
        assert_eq!(res.controller, None);
        assert!(!res.was_switch);

        a.set(&"LSS_01".into(), false);
        let res = resolve_controller(&rec, &a, true);
        assert_eq!(res.controller, None);
    }

    #[test]
    fn backup_chain_first_online_wins() {
        let r = build_default_roster();
        let mut rec = hab01(&r);
        rec.backups.push("LSS_02".into());
        let mut a = AvailabilityMap::all_online(&r);
        a.set(&"LSS_05".into(), false);
        a.set(&"LSS_01".into(), false);
        assert_eq!(resolve_controller(&rec, &a, true).controller, Some("LSS_02".into()));
    }

    #[test]
    fn person_level_outage() {
        let r = build_default_roster();
        let mut a = AvailabilityMap::all_online(&r);
        a.set(&"LSS_05".into(), false);
        let res = resolve_all(&r, &a, true);
        // LSS_05 owns HAB_01..03; all three switch.
        assert_eq!(role_switches(&res), 3);
        assert_eq!(unserviceable(&res), 0);
        let res = resolve_all(&r, &a, false);
        assert_eq!(role_switches(&res), 0);
        assert_eq!(unserviceable(&res), 3);
    }

    #[test]
    fn closed_forms() {
        assert!((expected_switches(22, 0.1, 0.1) - 1.98).abs() < 1e-12);
        assert_eq!(expected_switches(22, 0.0, 0.0), 0.0);
        assert_eq!(expected_switches(22, 1.0, 1.0), 0.0);
        assert_eq!(serviceability(1.0, 1.0), 0.0);
        assert!((expected_unserviceable(22, 0.1, 0.1) - 0.22).abs() < 1e-12);
    }

    #[test]
    fn empirical_offline_fraction() {
        // 20,000 runs of Bernoulli(0.1); 4.5-sigma band per controller, 0.1 +/- 0.0095.
        let r = build_default_roster();
        let mut rng = Substreams::new(7).stream(AVAILABILITY);
        let runs = 20_000;
        let mut offline: BTreeMap<AgentId, u32> = BTreeMap::new();
        for _ in 0..runs {
            for id in sample_availability(&r, 0.1, &mut rng).offline() {
                *offline.entry(id).or_default() += 1;
            }
        }
        assert_eq!(offline.len(), r.controllers().len());
        for (id, n) in offline {
            let frac = f64::from(n) / runs as f64;
            assert!((0.0905..=0.1095).contains(&frac), "{id}: {frac}");
        }
    }
}
