# Orthogonal and unitary group machinery
