"""Country co-authorship networks by gendered authorship category.

Records are filtered to international collaborations, split into
authorship categories, projected onto weighted country networks and
reduced to single-link minimal spanning trees whose motifs (leaves, hop
diameter) are reported per year and category.
"""

__version__ = "0.1.0"
