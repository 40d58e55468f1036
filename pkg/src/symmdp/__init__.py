"""symmdp: set-based symbolic analysis of Markov decision processes.

Core model (metered vertex sets / edge relations), symbolic graph
primitives (streaming SCCs, random attractors, BFS-layer separators),
separator-based and classical MEC decomposition, and qualitative
objective analysis (almost-sure reachability, parity), verified against
explicit-graph oracles.
"""

from .core import (ContractViolation, EdgeRelation, EmptyPickError,
                   ResourceMeter, SymbolicContext, SymbolicMdp, VertexSet,
                   release_all)
from .graph import (AttractorResult, graph_reach, random_attractor, scc_all,
                    scc_of, scc_stream, separator)
from .mec import (CollapseMap, MecDecomposition, RunStats, classical_mec,
                  classical_mec_stream, collapse_ec, default_gamma,
                  gamma_for_epsilon, mec_stream, rout, sym_mec, symbolic_mec,
                  trivial_mecs)
from .objectives import (PriorityMap, WinningRegion, asw_parity, min_priority,
                         sym_as_reach, win_pec)
from .oracle import (ExplicitMdp, explicit_asw_parity, explicit_asw_reach,
                     explicit_attractor, explicit_bfs_depth, explicit_diameter,
                     explicit_mec, explicit_reach, explicit_winning_ecs,
                     tarjan_scc)
from .generators import MdpModel, gen_cycle_chain, gen_layered, gen_uniform, generate
from .mdpfile import MdpParseError, format_mdp, parse_mdp, parse_mdp_text, write_mdp

__version__ = "0.1.0"

__all__ = [
    "AttractorResult", "CollapseMap", "ContractViolation", "EdgeRelation",
    "EmptyPickError", "ExplicitMdp", "MdpModel", "MdpParseError",
    "MecDecomposition", "PriorityMap", "ResourceMeter", "RunStats",
    "SymbolicContext", "SymbolicMdp", "VertexSet", "WinningRegion",
    "asw_parity", "classical_mec", "classical_mec_stream", "collapse_ec",
    "default_gamma", "explicit_asw_parity", "explicit_asw_reach",
    "explicit_attractor", "explicit_bfs_depth", "explicit_diameter",
    "explicit_mec", "explicit_reach",
    "explicit_winning_ecs", "format_mdp", "gamma_for_epsilon",
    "gen_cycle_chain", "gen_layered", "gen_uniform", "generate",
    "graph_reach", "mec_stream", "min_priority", "parse_mdp",
    "parse_mdp_text", "random_attractor", "release_all", "rout", "scc_all",
    "scc_of", "scc_stream", "separator", "sym_as_reach", "sym_mec",
    "symbolic_mec", "tarjan_scc", "trivial_mecs", "win_pec", "write_mdp",
]
