"""Hand-counted word, sentence, syllable, type and content-word totals.

Syllables follow the vowel-group rule (a e i o u y), minus one for a final
silent 'e' unless the word ends in consonant + "le" or would drop to zero.
Content words are tokens absent from the bundled stopword list.
Columns: text, N_w, N_s, N_syl, N_unique, N_content.
"""

HAND_COUNTED = [
    ("The cat sat.", 3, 1, 3, 3, 2),
    # define(2) an(1) operating(4) system(2)
    ("Define an operating system.", 4, 1, 9, 4, 3),
    # define(2) x(1) explain(2) y(1); "y" is a stopword
    ("Define X. Explain Y!", 4, 2, 6, 4, 3),
    ("don't stop", 2, 1, 2, 2, 1),
    ("The cat and the dog.", 5, 1, 5, 4, 2),
    ("The cat sat on the mat.", 6, 1, 6, 5, 3),
    # analyze(3) the(1) table(2)
    ("Analyze the table.", 3, 1, 6, 3, 2),
    # true(1) yes(1)
    ("Is it true? Yes! It is.", 6, 3, 6, 4, 2),
    # evaluate(3) efficiency(4) merge(1) sort(1)
    ("Evaluate the efficiency of merge sort.", 6, 1, 11, 6, 4),
    # summarize(3) tcp(1) udp(1)
    ("Summarize TCP and UDP.", 4, 1, 6, 4, 3),
    # apply(2) binary(3) search(1) algorithm(3) following(3) numbers(2)
    ("Apply the binary search algorithm to the following list of numbers.", 11, 1, 19, 10, 7),
    # propose(2) optimized(4) algorithm(3) sorting(2) data(2) real(1) time(1) systems(2)
    ("Propose an optimized algorithm for sorting data in real-time systems.", 11, 1, 20, 11, 8),
    # critique(2) efficiency(4) different(3) sorting(2) algorithms(3)
    ("Critique the efficiency of different sorting algorithms.", 7, 1, 16, 7, 5),
    # analyze(3) components(3) cloud(1) computing(3) system(2)
    ("Analyze the components of a cloud computing system.", 8, 1, 15, 8, 5),
    # why(1) because(2)
    ("Why? Because!", 2, 2, 3, 2, 0),
    # free(1) people(2)
    ("Free the people.", 3, 1, 4, 3, 2),
    ("The the the.", 3, 1, 3, 1, 0),
    # rhythm(1) 2024(1) myths(1)
    ("Rhythm 2024 and myths.", 4, 1, 4, 4, 3),
    # describe(2) queue(1) stack(1) heap(1)
    ("Describe a queue. Describe a stack. Describe a heap.", 9, 3, 12, 5, 6),
    # what's(1) time(1) complexity(4) quicksort(2) worst(1) case(1)
    ("What's the time complexity of quicksort, in the worst case?", 10, 1, 14, 9, 6),
]
