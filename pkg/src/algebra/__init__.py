# Exact ring and matrix arithmetic
