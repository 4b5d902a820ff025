# TEMPO Route engine
