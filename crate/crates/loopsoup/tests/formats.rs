use loopsoup::formats::{
    chain_stats_csv, parse_config, parse_cycles, parse_events, parse_partition_row, partition_row,
    write_config, write_cycles, write_events, FormatError,
};
use loopsoup_core::config::sample_configuration;
use loopsoup_core::cycles::{self, CycleBackend};
use loopsoup_core::exploration::{explore, simple_explore, ExplorationPoint};
use loopsoup_core::pd::sample_pd;
use loopsoup_core::rng::seeded;
use loopsoup_core::splitmerge::{chain_stats, CoupledPartitions};

#[test]
fn config_round_trip() {
    for seed in 0..50 {
        let cfg = sample_configuration(12, 2.0, 0.5, seed).unwrap();
        let back = parse_config(&write_config(&cfg)).unwrap();
        assert_eq!(back, cfg);
    }
}

#[test]
fn config_comments_and_errors() {
    let cfg = parse_config("# two vertices\n2 1 0.5\n1 2 0.25 B\n\n").unwrap();
    assert_eq!(cfg.links.len(), 1);
    assert!(matches!(parse_config(""), Err(FormatError::Syntax { .. })));
    assert!(matches!(
        parse_config("2 1 0.5\n1 2 0.25 Q\n"),
        Err(FormatError::Syntax { line: 2, .. })
    ));
    assert!(matches!(
        parse_config("2 1 0.5\n1 1 0.25 X\n"),
        Err(FormatError::Model(_))
    ));
    assert!(parse_config("2 1 0.5\n1 3 0.25 X\n").is_err());
}

#[test]
fn cycles_round_trip() {
    let cfg = sample_configuration(30, 1.5, 0.5, 4).unwrap();
    let cs = cycles::build(&cfg.to_ordered().unwrap())
        .unwrap()
        .canonical_cycles();
    let text = write_cycles(&cs);
    assert_eq!(parse_cycles(&text).unwrap(), cs);
    assert!(parse_cycles("1^+ 2^x\n").is_err());
}

#[test]
fn cycle_dump_style() {
    let cfg = parse_config("3 1 0\n1 2 0.5 B\n").unwrap();
    let cs = cycles::build(&cfg.to_ordered().unwrap()).unwrap();
    let text = write_cycles(&cs.canonical_cycles());
    for line in text.lines() {
        assert!(line
            .split(' ')
            .all(|t| t.ends_with("^+") || t.ends_with("^-")));
    }
}

#[test]
fn events_round_trip() {
    let cfg = sample_configuration(8, 2.0, 0.5, 11).unwrap();
    let (traj, _) = explore(&cfg, ExplorationPoint::new(1, 0.0, 1), 100.0).unwrap();
    assert_eq!(parse_events(&write_events(&traj)).unwrap(), traj.events);
    let (traj, _, _) = simple_explore(100, 1.5, 0.5, 3, 20.0).unwrap();
    assert_eq!(parse_events(&write_events(&traj)).unwrap(), traj.events);
}

#[test]
fn partition_rows() {
    let p = sample_pd(0.5, 1e-6, &mut seeded(2)).unwrap();
    let row = partition_row(&p.parts);
    assert_eq!(parse_partition_row(&row).unwrap(), p.parts);
    assert_eq!(parse_partition_row("").unwrap(), Vec::<f64>::new());
    assert!(parse_partition_row("0.5,x").is_err());
}

#[test]
fn chain_csv_header_and_rows() {
    let cp = CoupledPartitions::new(&[0.6, 0.4], &[0.5, 0.5]).unwrap();
    let stats = vec![chain_stats(&cp, 0, &[0.1, 0.45])];
    let csv = chain_stats_csv(&stats, &[0.1, 0.45]);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,R,Q,y1,y2,z1,Neps_0.1,Neps_0.45");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 8);
    assert_eq!(row[6], "4");
    assert_eq!(row[7], "3");
}
