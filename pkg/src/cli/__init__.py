# Command line front end
