# Exceptions and output rendering
