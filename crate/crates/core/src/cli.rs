// Copyright (C) 2026 The mapfr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! The `mapfr` command line: `solve`, `validate`, `compare` and `render`.
//!
//! Exit codes: 0 success, 1 bad input, 2 no solution exists (root
//! infeasible or tree exhausted), 3 node or time limit, 4 validation found
//! problems.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::branching::BranchingRule;
use crate::io;
use crate::model::Objective;
use crate::oracle::validate_joint;
use crate::search::{compare, render_table, solve, SolveStatus, SolverConfig};
use crate::svg::{render, SvgOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mapfr", version, about = "Continuous-time multi-agent path finding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Soc,
    Makespan,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Soc => Objective::SumOfCosts,
            ObjectiveArg::Makespan => Objective::Makespan,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Limits {
    #[arg(long, default_value_t = 100_000)]
    pub max_nodes: usize,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub max_time: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and write the solution.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "sound")]
        rule: String,
        #[arg(long, default_value_t = crate::branching::DEFAULT_GAMMA)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Soc)]
        objective: ObjectiveArg,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print one line per expanded node to standard error.
        #[arg(long)]
        trace: bool,
        /// Print the constraint set of the solution node.
        #[arg(long)]
        constraints: bool,
    },
    /// Check a solution file against an instance.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Solve with several rules and tabulate the results.
    Compare {
        instance: PathBuf,
        #[arg(long, default_value = "standard,sound")]
        rules: String,
        #[arg(long, default_value_t = crate::branching::DEFAULT_GAMMA)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Soc)]
        objective: ObjectiveArg,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Draw an instance, optionally with a solution, as SVG.
    Render {
        instance: PathBuf,
        solution: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Seconds between position markers; 0 disables them.
        #[arg(long, default_value_t = 0.5)]
        marker_step: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LogLevel {
    Off,
    Info,
    Trace,
}

fn log_level(trace_flag: bool) -> LogLevel {
    let env = match std::env::var("MAPFR_LOG").as_deref() {
        Ok("trace") => LogLevel::Trace,
        Ok("info") => LogLevel::Info,
        _ => LogLevel::Off,
    };
    if trace_flag {
        LogLevel::Trace
    } else {
        env
    }
}

fn limits(l: &Limits) -> Result<Duration, String> {
    if l.max_nodes == 0 {
        return Err("--max-nodes must be positive".into());
    }
    Duration::try_from_secs_f64(l.max_time)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| format!("--max-time must be a positive number of seconds, got {}", l.max_time))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_BAD_INPUT
        }
    }
}

fn execute(command: Command) -> Result<i32, String> {
    match command {
        Command::Solve {
            instance,
            rule,
            gamma,
            objective,
            limits: l,
            output,
            trace,
            constraints,
        } => {
            let inst = io::load_instance(&instance).map_err(|e| e.to_string())?;
            let rule = BranchingRule::parse(&rule, gamma).map_err(|e| e.to_string())?;
            let level = log_level(trace);
            let config = SolverConfig {
                rule,
                objective: objective.into(),
                max_nodes: l.max_nodes,
                max_wall_time: limits(&l)?,
                trace: level >= LogLevel::Trace,
            };
            let r = solve(&inst, &config);
            for line in &r.trace {
                eprintln!("{line}");
            }
            if level >= LogLevel::Info {
                eprintln!(
                    "rule={} status={} generated={} replans={} discarded={}",
                    rule, r.status, r.stats.generated, r.stats.replans, r.stats.discarded
                );
            }
            if let Some(err) = &r.error {
                eprintln!("error: {err}");
            }
            let time = r.stats.wall_time.as_secs_f64();
            match &r.solution {
                Some(sol) => {
                    if let Some(path) = &output {
                        write_or_print(Some(path), &io::solution_to_json(&inst, sol))?;
                    }
                    println!(
                        "cost={:.3} makespan={:.3} expanded={} time={:.6}",
                        r.cost.unwrap_or(f64::NAN),
                        sol.makespan(),
                        r.stats.expanded,
                        time
                    );
                    if constraints {
                        print!("{}", r.constraints.dump(&inst));
                    }
                }
                None => println!(
                    "status={} expanded={} time={:.6}",
                    r.status, r.stats.expanded, time
                ),
            }
            Ok(match r.status {
                SolveStatus::Solved => EXIT_OK,
                SolveStatus::RootInfeasible | SolveStatus::Exhausted => EXIT_NO_SOLUTION,
                SolveStatus::NodeLimit | SolveStatus::TimeLimit => EXIT_LIMIT,
                SolveStatus::Failed => EXIT_BAD_INPUT,
            })
        }
        Command::Validate { instance, solution } => {
            let inst = io::load_instance(&instance).map_err(|e| e.to_string())?;
            let joint = io::load_solution(&inst, &solution).map_err(|e| e.to_string())?;
            let report = validate_joint(&inst, &joint, None);
            for line in report.lines(&inst) {
                println!("{line}");
            }
            if report.is_empty() {
                println!(
                    "valid sum_of_costs={:.3} makespan={:.3}",
                    joint.sum_of_costs(),
                    joint.makespan()
                );
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_INVALID)
            }
        }
        Command::Compare {
            instance,
            rules,
            gamma,
            objective,
            limits: l,
            json,
        } => {
            let inst = io::load_instance(&instance).map_err(|e| e.to_string())?;
            let rules = rules
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| BranchingRule::parse(s, gamma))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let rows = compare(&inst, &rules, objective.into(), l.max_nodes, limits(&l)?);
            if json {
                println!("{}", io::compare_to_json(&rows));
            } else {
                print!("{}", render_table(&rows));
            }
            Ok(EXIT_OK)
        }
        Command::Render {
            instance,
            solution,
            output,
            marker_step,
        } => {
            let inst = io::load_instance(&instance).map_err(|e| e.to_string())?;
            let joint = solution
                .map(|p| io::load_solution(&inst, p))
                .transpose()
                .map_err(|e| e.to_string())?;
            let opts = SvgOptions {
                marker_step: (marker_step > 0.0).then_some(marker_step),
                ..SvgOptions::default()
            };
            write_or_print(output.as_deref(), &render(&inst, joint.as_ref(), &opts))?;
            Ok(EXIT_OK)
        }
    }
}
