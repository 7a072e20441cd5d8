"""rackforge: finite racks and quandles.

Construction and validation of operation tables, inner groups, the
classification of indecomposable racks of order p^2, a brute-force
enumeration oracle, nonabelian quandle cohomology over (Z_p, q), and
twisted-conjugation orbits on the nonabelian groups of order p^3.
"""

from .affine import (AbelianGroup, AffineQuandle, affine_is_faithful,
                     affine_is_indecomposable, affine_pairs_isomorphic,
                     affine_to_rack, cyclic, elementary, field)
from .classify import (CatalogEntry, CountTable, class_counts, classify_p2,
                       identify, verify_valuation)
from .cohomology import (CoeffGroup, Cocycle, coboundary, coeff_from_name,
                         cohomologous, cyclic_coeff,
                         enumerate_normalized_quandle_cocycles, extension_of,
                         h2q_is_trivial, is_cocycle, is_quandle_cocycle,
                         normalize, sym_coeff, trivial_cocycle)
from .enumeration import (EnumerationResult, enumerate_all_naive,
                          enumerate_connected)
from .errors import ResourceLimitError
from .perm import PermGroup, closure, is_transitive, orbits
from .rack import (Iota, Rack, RackProps, are_isomorphic, associated_quandle,
                   automorphism_group, canonical_form, extension,
                   image_quandle, inner_group, iota, is_faithful,
                   is_indecomposable, orbit_decomposition, rack_from_json_dict,
                   rack_from_table, relabel, validate)
from .twisted import (HeisAut, MetaAut, build_heis_aut, build_meta_aut,
                      heis_case, meta_case, predicted_affine, twisted_orbit,
                      verify_orbit_affine)

__version__ = "0.1.0"
