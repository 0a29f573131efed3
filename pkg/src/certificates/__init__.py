# Certificate engine, codec and verifier
