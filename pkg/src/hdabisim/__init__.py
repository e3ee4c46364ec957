"""Higher-dimensional automata: ipomsets, track objects, paths, bisimulations and modal logic."""

from .bisim import (Verdict, bounded_path_bisim, bounded_track_bisim, cell_bisim,
                    check_cell_relation, closed_cell_bisim, default_depth, initial_track,
                    is_open, span_from_relation, strong_path_bisim_exact, t0_bisim)
from .corpus import corpus_pairs, gen_corpus
from .errors import *  # noqa: F401,F403
from .fixtures import example, example_names, geometric_hda
from .hda import (Hda, accessible_cells, check_hda, hda_to_json, load_hda, standard_cube,
                  validate_map, yoneda_map)
from .ipml import (distinguish, distinguishing_formula, modal_depth, parse_formula,
                   render_formula, sat, sat_initial, sat_track)
from .ipomset import (EMPTY, Ipomset, IpMorphism, canonical_form, compose_ip, discrete,
                      final_inclusion_ip, glue, glue_all, identity_ip, identity_ipomset,
                      initial_inclusion_ip, ipomset_from_json, ipomset_to_json, is_interval,
                      iso, isomorphic, load_ipomset, maximal_antichains,
                      minimal_discrete_decomposition, parse_ipomset, render_ipomset,
                      validate_ipomset)
from .paths import (Path, build_path, characteristic_path, concat, congruent, empty_path, ev,
                    is_restriction, is_sparse, label_extensions, lower_face_path,
                    path_from_track, restrictions, sparse, track_from_path)
from .tracks import (Track, TrackObject, final_inclusion, glue_track_objects, glue_tracks,
                     initial_inclusion, track_object)
