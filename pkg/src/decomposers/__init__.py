# Entry decompositions into sigma-conjugates
