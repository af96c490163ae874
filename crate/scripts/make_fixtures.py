#!/usr/bin/env python3
"""Regenerates the CLI fixtures: a 50-document corpus, labeled task files,
evaluation tasks and the default instruction templates.

Output is a pure function of SEED, so rerunning leaves the files unchanged.
"""

import json
import os
import random

SEED = 20221019
ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "cli", "fixtures")

TOPICS = {
    "sports": [
        "The {team} beat the {team2} 3-1 at {city} Stadium on {weekday}.",
        "Coach {person} said the defence played with real discipline.",
        "The {team} have now won five straight games.",
        "Fans in {city} celebrated late into the night.",
        "The final whistle came after a tense second half.",
        "{person} scored twice before the break.",
        "The league table now shows the {team} in second place.",
    ],
    "politics": [
        "The council in {city} approved the new budget on {weekday}.",
        "Mayor {person} said the plan would cut waiting times at the clinic.",
        "Opposition members argued that taxes would rise.",
        "The vote passed by a narrow margin of 7 to 5.",
        "Residents packed the hall to hear the debate.",
        "Senator {person} called the bill a careful compromise.",
        "The measure now goes to the state assembly in {city}.",
    ],
    "technology": [
        "{company} Inc. unveiled a faster chip at its event in {city}.",
        "Engineers said the new design uses far less power.",
        "Analyst {person} expects shipments to grow next year.",
        "The software update will reach older phones in {month}.",
        "Security researchers found a serious flaw in the browser.",
        "The startup raised 40 million dollars from investors.",
        "{company} Inc. plans to open a lab near {city}.",
    ],
    "business": [
        "Shares of {company} Inc. rose 4 percent on {weekday}.",
        "The retailer reported strong sales during the holiday season.",
        "Chief executive {person} promised to cut costs.",
        "Profit fell because fuel prices climbed sharply.",
        "The bank lowered its forecast for the second quarter.",
        "Investors in {city} welcomed the merger.",
        "The company will hire 300 workers at its plant in {city}.",
    ],
    "health": [
        "Doctors at {city} General Hospital tested a new treatment.",
        "Dr. {person} said early results look encouraging.",
        "The clinic will offer free flu shots in {month}.",
        "Researchers followed 1200 patients for two years.",
        "Regular exercise lowered the risk of heart disease.",
        "The health board warned about a rise in measles cases.",
        "Nurses in {city} asked for better pay.",
    ],
    "science": [
        "Astronomers at the {city} Observatory spotted a distant comet.",
        "Professor {person} said the finding surprised the team.",
        "The telescope recorded faint light from an old galaxy.",
        "Biologists discovered a new species of frog near Lake {lake}.",
        "The study appeared in a leading journal in {month}.",
        "Samples from the river showed high levels of salt.",
        "The team plans a second expedition next spring.",
    ],
    "weather": [
        "Heavy rain flooded several roads in {city} on {weekday}.",
        "Forecaster {person} expects cold air to arrive by the weekend.",
        "Strong winds knocked down trees across the valley.",
        "The storm dropped 5 inches of snow in the hills.",
        "Schools closed early because of the ice.",
        "Temperatures will stay low until {month}.",
        "Farmers welcomed the rain after a long dry summer.",
    ],
    "education": [
        "The school board in {city} hired 20 new teachers.",
        "Principal {person} said class sizes would shrink.",
        "Students at {city} University protested the fee increase.",
        "The district will open a new library in {month}.",
        "Test scores improved in reading and math.",
        "Parents asked for safer bus routes.",
        "The college added a course on data science.",
    ],
    "travel": [
        "Tourists flocked to {city} for the spring festival.",
        "The airline added a direct flight to {city2} in {month}.",
        "Guide {person} leads walking tours through the old town.",
        "Hotel prices rose during the busy summer months.",
        "The coastal road offers a quiet and scenic drive.",
        "Visitors can rent bikes near the harbour.",
        "The museum in {city} stays open late on {weekday}.",
    ],
    "food": [
        "A new bakery opened on Main Street in {city}.",
        "Chef {person} serves fresh fish from the harbour.",
        "The market sells cheap vegetables every {weekday}.",
        "Diners praised the spicy soup and the warm bread.",
        "The cafe will close for repairs in {month}.",
        "Local farmers supply most of the fruit.",
        "The festival drew large crowds hungry for street food.",
    ],
    "crime": [
        "Police in {city} arrested two men after a robbery on {weekday}.",
        "Detective {person} said the suspects fled in a stolen car.",
        "The jewellery store lost goods worth 50000 dollars.",
        "Witnesses described a loud crash near the bank.",
        "The court will hear the case in {month}.",
        "Officers recovered most of the stolen items.",
        "Neighbours asked for more patrols at night.",
    ],
    "music": [
        "The band {band} played a sold-out show in {city}.",
        "Singer {person} thanked the crowd for their patience.",
        "The new album reached the top of the charts in {month}.",
        "Critics praised the bright and joyful melodies.",
        "The orchestra will tour {city2} next year.",
        "Tickets for the festival sold out in minutes.",
        "The drummer joined the group only last spring.",
    ],
    "environment": [
        "Volunteers planted 500 trees along the river in {city}.",
        "Activist {person} urged the council to ban plastic bags.",
        "The lake near {city2} is cleaner than it was a decade ago.",
        "Officials closed the beach after a chemical spill.",
        "Solar panels now power the town hall.",
        "The wetland provides a home for rare birds.",
        "A new law limits fishing in {month}.",
    ],
    "transport": [
        "The new tram line in {city} opened on {weekday}.",
        "Commuters said the trains were crowded and late.",
        "Transit chief {person} promised more buses by {month}.",
        "The bridge will close for repairs for two weeks.",
        "Cyclists asked for safer lanes downtown.",
        "Fares will rise by 10 percent next year.",
        "The airport expects record traffic this summer.",
    ],
    "culture": [
        "The gallery in {city} opened a show of modern paintings.",
        "Curator {person} spent three years collecting the works.",
        "The theatre will stage a classic comedy in {month}.",
        "Critics called the exhibition bold and moving.",
        "The library hosts free poetry readings every {weekday}.",
        "Writers from {city2} gathered for the book fair.",
        "The old cinema reopened after a long restoration.",
    ],
    "housing": [
        "House prices in {city} rose 6 percent last year.",
        "Agent {person} said buyers face fierce competition.",
        "The developer will build 200 homes near the station.",
        "Rents climbed faster than wages in {month}.",
        "The city approved a plan for cheaper housing.",
        "Older buildings need costly repairs.",
        "Mortgage rates fell slightly in the spring.",
    ],
}

TEAMS = ["Eagles", "Falcons", "Tigers", "Rangers", "Pioneers", "Hawks", "Wolves"]
PEOPLE = ["Smith", "Alvarez", "Nguyen", "Okafor", "Lindqvist", "Moreau", "Patel", "Kowalski", "Tanaka", "Brennan"]
CITIES = ["Springfield", "Riverton", "Lakewood", "Ashford", "Marlow", "Kingsport", "Dunmore", "Halifax", "Brookfield"]
COMPANIES = ["Nortek", "Bluefin", "Corvid", "Lumina", "Tessel"]
BANDS = ["Paper Lanterns", "Blue Harbor", "Night Owls"]
LAKES = ["Xiaochaidan", "Louise", "Tahoe"]
MONTHS = ["January", "March", "May", "June", "September", "November"]
WEEKDAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"]
SITES = ["mydailyregister", "valleyherald", "coastaltimes", "metrodispatch", "northstarnews"]


def fill(rng, s):
    city, city2 = rng.sample(CITIES, 2)
    team, team2 = rng.sample(TEAMS, 2)
    return s.format(
        team=team, team2=team2, city=city, city2=city2, person=rng.choice(PEOPLE),
        company=rng.choice(COMPANIES), band=rng.choice(BANDS), lake=rng.choice(LAKES),
        month=rng.choice(MONTHS), weekday=rng.choice(WEEKDAYS),
    )


def article(rng, topic, n):
    pool = TOPICS[topic]
    picks = rng.sample(range(len(pool)), n)
    return [fill(rng, pool[i]) for i in picks]


def news_docs(rng):
    docs = []
    topics = sorted(TOPICS)
    for i in range(22):
        topic = topics[i % len(topics)]
        sents = article(rng, topic, rng.randint(5, 7))
        title = sents[0].rstrip(".")
        slug = "-".join(w.lower().strip(".,") for w in title.split()[:5])
        url = "https://www.%s.com/%s/%d/%s" % (SITES[i % len(SITES)], topic, 14000 + i, slug)
        if i == 0:
            # the appendix TC example
            url = "https://www.mydailyregister.com/sports/14501/eagles-topple-trimble-8-5"
            sents = [
                "The Eastern baseball team trailed Trimble 2-0 after the first inning on Monday.",
                "Coach Smith said the Eagles stayed calm and kept swinging.",
                "The Eagles answered with four runs in the third inning.",
                "Trimble rallied late but could not close the gap.",
                "The Eagles won 8-5 and now lead the league.",
            ]
            title = "Eagles topple Trimble 8-5"
        body = " ".join(sents[:3]) + "\n\n" + " ".join(sents[3:])
        docs.append({"text": body, "url": url, "title": title})
    return docs


ENCYCLOPEDIA = [
    ("Liniewo area", "Gdanśk is the regional capital of Pomerania. Kościerzyna is a town to the south-west of it. "
     "It lies west of Liniewo, east of Kościerzyna, and south-west of the regional capital Gdanśk. "
     "South-east of Kościerzyna, and south-west of the regional capital Gdanśk, it lies approximately south of Liniewo. "
     "The village has a population of about 400 people."),
    ("Psychroflexus planctonicus", "Psychroflexus is a genus of bacteria found in salty water. "
     "Psychroflexus planctonicus is a gram-negative bacteria which has been isolated from the Lake Xiaochaidan in the Qinghai Province in China. "
     "The species grows best in cold and salty conditions. "
     "Scientists described it in a journal article in 2015."),
    ("Riverton", "Riverton is a small city in the northern valley. "
     "The town was founded in 1852 by settlers from Halifax. "
     "The old mill on the Elm River still stands near the main square. "
     "Riverton University opened in 1901 and now has 9000 students. "
     "The city hosts a music festival every June."),
    ("Lake Louise", "Lake Louise is a glacial lake in the mountains. "
     "The lake lies west of Banff and north of the Bow Valley. "
     "Tourists visit it every summer for its bright blue water. "
     "A large hotel stands on the eastern shore. "
     "The lake freezes solid in January."),
    ("Kingsport Observatory", "The Kingsport Observatory is a research station on a high ridge. "
     "Professor Moreau founded it in 1964 with support from Kingsport University. "
     "Its main telescope has a mirror that is 4 metres wide. "
     "Astronomers there discovered a comet in March 1997. "
     "The observatory offers public tours on Friday nights."),
    ("Ashford Bridge", "The Ashford Bridge crosses the Marlow River near the old harbour. "
     "Engineers completed the steel arch in 1932. "
     "The bridge carries two lanes of traffic and a narrow footpath. "
     "Repairs in 2010 replaced most of the rusted cables. "
     "Local artists painted the railings bright red."),
    ("Dunmore Castle", "Dunmore Castle is a ruined fortress on the coast. "
     "The castle was built in 1320 by Lord Brennan. "
     "Storms destroyed the western tower in 1703. "
     "The ruins now belong to the Dunmore Heritage Trust. "
     "Visitors can walk along the remaining walls."),
    ("Tessel Inc.", "Tessel Inc. is a technology company based in Lakewood. "
     "Founder Tanaka started the firm in a garage in 1998. "
     "The company makes cheap sensors for farm equipment. "
     "Tessel Inc. employs about 1200 people in three countries. "
     "Its largest factory is in Brookfield."),
]

FORUM = [
    ("Just open-source it", "We built an internal tool for scheduling jobs on the cluster. "
     "People keep asking the same question. "
     "\"Just open-source it\" is a sentiment I hear a lot, so why don't you just open-source it as-is? "
     "My answer is: it's impractical, and it would take real work to do properly. "
     "The code depends on private services that nobody else can run. "
     "The documentation is thin and out of date. "
     "Supporting outside users would take time we do not have. "
     "Maybe next year we will clean it up and publish it."),
    ("Best way to learn piano", "I started lessons last month. "
     "What is the best way to practise every day? "
     "Short and regular sessions work better than long ones. "
     "Start with scales and simple songs. "
     "Record yourself and listen for mistakes. "
     "A good teacher will correct your posture early. "
     "Most of all, be patient with yourself."),
    ("Slow laptop", "My laptop became very slow after the last update. "
     "Has anyone found a fix for this problem? "
     "Try turning off the programs that start with the computer. "
     "Check the disk for errors and free some space. "
     "Updating the graphics driver helped me a lot. "
     "If nothing works, a clean install is the last resort."),
    ("Garden soil", "Our tomatoes grew poorly this summer. "
     "Why do the leaves turn yellow so early? "
     "The soil probably lacks nitrogen. "
     "Add compost before planting next spring. "
     "Water deeply but less often. "
     "Rotate the beds so the same crop does not grow in one place every year."),
]

BOOKS = [
    "The old house stood at the end of a long and narrow lane. Nobody had lived there for years. "
    "Anna pushed the heavy door and stepped into the cold hall. Dust covered the table and the chairs. "
    "She found a letter on the piano, addressed to her grandmother. The envelope was yellow and fragile.",
    "Captain Moreau watched the storm gather over the harbour. The sailors tied the ropes and closed the hatches. "
    "By nightfall the waves were higher than the mast. The ship rolled but the hull held firm. "
    "At dawn the sea was calm again, and the crew cheered.",
    "Tom fed the dog. The dog ate meat. Then the dog slept by the warm fire. "
    "Outside, the snow fell softly on the empty road. Tom read a book until midnight. "
    "In the morning he walked the dog along the frozen river and watched the birds.",
    "The village school had only one teacher and twelve pupils. Every morning Miss Patel rang a small brass bell. "
    "The children learned to read, to count, and to sing. In winter they carried wood for the stove. "
    "Years later many of them still remembered her kind and patient voice.",
]

REVIEWS = [
    "AMAZING! The staff was so friendly, welcoming and the food was superb! We will definitely come back. "
    "The dessert was delicious and the prices were fair. Highly recommended for families. "
    "Parking was easy and the waiters were patient with our noisy children.",
    "This film was a wonderful surprise. The acting is brilliant and the story is moving. "
    "I loved the music and the beautiful photography. One of the best movies of the year. "
    "The whole audience clapped at the end, and we talked about it all the way home.",
    "Terrible experience. The room was dirty and the staff were rude. The bed was awful and the shower was broken. "
    "We complained twice and nobody helped. I would never stay here again. "
    "The breakfast was cold and the coffee tasted bitter and stale.",
    "What a boring and disappointing movie. The plot is stupid and the dialogue is painful. "
    "The actors seemed tired and the ending was a mess. I wasted two hours of my life. "
    "Even the popcorn was stale, and the seats were hard and uncomfortable.",
    "Great little cafe with excellent coffee and friendly service. The cakes are fresh and tasty. "
    "It is a lovely place to relax on a quiet afternoon. I enjoyed every visit. "
    "The owner remembers our names and always has a kind word for everyone.",
    "The phone arrived broken and the support team was useless. The battery is weak and the screen is poor. "
    "I am angry and frustrated with this purchase. Avoid this seller. "
    "The refund took six weeks and the replacement was just as bad.",
    "A charming and funny show with a talented cast. The jokes are clever and the songs are joyful. "
    "My kids laughed the whole time. Perfect for a happy evening out. "
    "We already booked tickets for the next season and cannot wait to go back.",
    "The book is dull, slow and confusing. The characters are flat and the writing is weak. "
    "I was bored after the first chapter and gave up. Not worth the money at all. "
    "The cover is pretty, but that is the only good thing about it.",
]


def write_jsonl(path, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def corpus(rng):
    base = os.path.join(ROOT, "corpus")
    write_jsonl(os.path.join(base, "news.jsonl"), news_docs(rng))
    write_jsonl(os.path.join(base, "encyclopedia.jsonl"),
                [{"text": t, "title": title} for title, t in ENCYCLOPEDIA])
    web = []
    for i, (title, text) in enumerate(FORUM):
        web.append({"text": text, "title": title})
    topics = sorted(TOPICS)
    for i in range(4):
        topic = topics[(i * 5 + 3) % len(topics)]
        sents = article(rng, topic, 6)
        web.append({"text": " ".join(sents), "url": "https://blog.example.net/%s/post-%d" % (topic, i)})
    write_jsonl(os.path.join(base, "web.jsonl"), web)
    write_jsonl(os.path.join(base, "books.jsonl"), [{"text": t} for t in BOOKS])
    write_jsonl(os.path.join(base, "reviews.jsonl"), [{"text": t} for t in REVIEWS])


NOUNS = ["river", "bridge", "garden", "market", "library", "harbour", "forest", "station", "castle", "museum",
         "teacher", "farmer", "doctor", "pilot", "baker", "painter", "window", "ladder", "basket", "lantern"]
ADJS_POS = ["wonderful", "excellent", "delightful", "brilliant", "pleasant", "superb", "lovely", "great"]
ADJS_NEG = ["terrible", "awful", "dreadful", "boring", "poor", "horrible", "disappointing", "bad"]


def labeled(rng):
    base = os.path.join(ROOT, "labeled")
    n = 150

    def mcqa(task):
        rows = []
        for i in range(n):
            a, b, c, d = rng.sample(NOUNS, 4)
            city = rng.choice(CITIES)
            rows.append({"id": str(i), "task": task, "cluster": "mcqa",
                         "passage": "In %s the %s stands next to the %s." % (city, a, b),
                         "question": "What stands next to the %s in %s?" % (b, city),
                         "options": [a, c, d, b], "answer_index": 0, "method": "mined_question"})
            rng.shuffle(rows[-1]["options"])
            rows[-1]["answer_index"] = rows[-1]["options"].index(a)
        return rows

    def exqa(task):
        rows = []
        for i in range(n):
            person, city = rng.choice(PEOPLE), rng.choice(CITIES)
            year = rng.randint(1850, 2020)
            passage = "%s moved to %s in %d and opened a small %s there." % (person, city, year, rng.choice(NOUNS))
            ans = city if i % 2 == 0 else str(year)
            q = "Where did %s move to?" % person if i % 2 == 0 else "When did %s move to %s?" % (person, city)
            start = passage.index(ans)
            rows.append({"id": str(i), "task": task, "cluster": "exqa", "passage": passage, "question": q,
                         "answer": ans, "answer_char_span": [start, start + len(ans)]})
        return rows

    def cbqa(task):
        rows = []
        for i in range(n):
            city = rng.choice(CITIES)
            noun = rng.choice(NOUNS)
            rows.append({"id": str(i), "task": task, "cluster": "cbqa",
                         "question": "Which town is famous for its old %s, %d?" % (noun, i),
                         "answer": city, "source_exqa_id": ""})
        return rows

    def sent(task):
        rows = []
        for i in range(n):
            pos = i % 2 == 0
            adj = rng.choice(ADJS_POS if pos else ADJS_NEG)
            noun = rng.choice(["film", "meal", "hotel", "concert", "book", "service"])
            rows.append({"id": str(i), "task": task, "cluster": "sent",
                         "text": "The %s was %s and I would %s it." % (noun, adj, "recommend" if pos else "avoid"),
                         "label": "Positive" if pos else "Negative", "score": 0.0})
        return rows

    def tc(task):
        labels = ["sports", "business", "science", "world"]
        rows = []
        for i in range(n):
            label = labels[i % 4]
            topic = {"sports": "sports", "business": "business", "science": "science", "world": "politics"}[label]
            rows.append({"id": str(i), "task": task, "cluster": "tc",
                         "text": " ".join(article(rng, topic, 3)), "label": label})
        return rows

    def s2t(task):
        rows = []
        for i in range(n):
            a, b = rng.sample(NOUNS, 2)
            city = rng.choice(CITIES)
            rows.append({"id": str(i), "task": task, "cluster": "s2t", "keywords": [a, b, city],
                         "text": "The %s near the %s in %s was busy." % (a, b, city)})
        return rows

    def summ(task):
        rows = []
        topics = sorted(TOPICS)
        for i in range(n):
            sents = article(rng, topics[i % len(topics)], 4)
            rows.append({"id": str(i), "task": task, "cluster": "sum", "document": " ".join(sents[1:]),
                         "summary": sents[0], "kind": "LSG"})
        return rows

    def para(task):
        rows = []
        for i in range(n):
            a, b = rng.sample(NOUNS, 2)
            s1 = "The %s is next to the %s." % (a, b)
            if i % 2 == 0:
                rows.append({"id": str(i), "task": task, "cluster": "para", "sentence1": s1,
                             "sentence2": "Next to the %s is the %s." % (b, a), "label": "yes"})
            else:
                rows.append({"id": str(i), "task": task, "cluster": "para", "sentence1": s1,
                             "sentence2": "The %s is next to the %s." % (b, a), "label": "not",
                             "perturbation": "noun_shuffle"})
        return rows

    tasks = [
        ("mcqa_alpha", mcqa), ("mcqa_beta", mcqa), ("exqa_alpha", exqa), ("exqa_beta", exqa),
        ("cbqa_alpha", cbqa), ("sent_alpha", sent), ("sent_beta", sent), ("tc_alpha", tc),
        ("s2t_alpha", s2t), ("sum_alpha", summ), ("sum_beta", summ), ("para_alpha", para),
    ]
    for name, fn in tasks:
        write_jsonl(os.path.join(base, name + ".jsonl"), fn(name))


def eval_tasks(rng):
    base = os.path.join(ROOT, "eval")
    rows = []
    for i in range(40):
        a, b, c = rng.sample(NOUNS, 3)
        rows.append({"id": str(i), "task": "story_cloze_toy", "cluster": "mcqa",
                     "passage": "The %s was next to the %s." % (a, b),
                     "question": "What was next to the %s?" % b,
                     "options": [a, c], "answer_index": 0 if i % 3 else 1, "method": "mined_question"})
    write_jsonl(os.path.join(base, "story_cloze_toy.jsonl"), rows)
    rows = []
    topics = sorted(TOPICS)
    for i in range(20):
        sents = article(rng, topics[i % len(topics)], 4)
        rows.append({"id": str(i), "task": "headline_toy", "cluster": "sum", "document": " ".join(sents),
                     "summary": sents[0], "kind": "LSG"})
    write_jsonl(os.path.join(base, "headline_toy.jsonl"), rows)


TEMPLATES = [
    {"id": "mcqa_plain", "cluster": "mcqa", "input_pattern": "{{passage}}\nQuestion: {{question}}\nOptions:\n{{options}}\nAnswer:"},
    {"id": "mcqa_choose", "cluster": "mcqa", "input_pattern": "Read the text and choose the best answer.\n{{passage}}\n{{question}}\nChoices: {{options}}", "options_separator": " || "},
    {"id": "mcqa_cloze", "cluster": "mcqa", "input_pattern": "Fill in the blank: {{question}}\nContext: {{passage}}\nPick one of: {{options}}", "options_separator": ", "},
    {"id": "exqa_extract", "cluster": "exqa", "input_pattern": "Extract the answer to the question from the passage.\nPassage: {{passage}}\nQuestion: {{question}}", "target_pattern": "{{answer}}"},
    {"id": "exqa_read", "cluster": "exqa", "input_pattern": "{{passage}}\n\nQ: {{question}}\nA:", "target_pattern": "{{answer}}"},
    {"id": "exqa_qg", "cluster": "exqa", "input_pattern": "Write a question about the passage whose answer is \"{{answer}}\".\n{{passage}}", "target_pattern": "{{question}}"},
    {"id": "cbqa_recall", "cluster": "cbqa", "input_pattern": "Answer the question: {{question}}", "target_pattern": "{{answer}}"},
    {"id": "cbqa_trivia", "cluster": "cbqa", "input_pattern": "Trivia question. {{question}} Answer:", "target_pattern": "{{answer}}"},
    {"id": "sent_review", "cluster": "sent", "input_pattern": "{{text}}\nIs this review positive or negative?", "answer_choices": ["Positive", "Negative"]},
    {"id": "sent_feel", "cluster": "sent", "input_pattern": "How does the writer feel? \"{{text}}\"", "answer_choices": ["good", "bad"]},
    {"id": "tc_topic", "cluster": "tc", "input_pattern": "What is the topic of this article? {{text}}\nPossible topics: {{choices}}"},
    {"id": "tc_section", "cluster": "tc", "input_pattern": "{{text}}\nWhich newspaper section does this belong to?"},
    {"id": "s2t_compose", "cluster": "s2t", "input_pattern": "Write a sentence using these words: {{keywords}}.", "target_pattern": "{{text}}"},
    {"id": "s2t_concepts", "cluster": "s2t", "input_pattern": "Concepts: {{keywords}}\nGenerate a sentence with all the concepts:", "options_separator": " | ", "target_pattern": "{{text}}"},
    {"id": "sum_brief", "cluster": "sum", "input_pattern": "Summarize the following article in brief: {{document}}", "target_pattern": "{{summary}}"},
    {"id": "sum_tldr", "cluster": "sum", "input_pattern": "{{document}}\n\nTL;DR:", "target_pattern": "{{summary}}"},
    {"id": "para_same", "cluster": "para", "input_pattern": "Sentence 1: {{sentence1}}\nSentence 2: {{sentence2}}\nDo these sentences mean the same thing?", "answer_choices": ["yes", "no"]},
    {"id": "para_paraphrase", "cluster": "para", "input_pattern": "Is \"{{sentence2}}\" a paraphrase of \"{{sentence1}}\"?", "answer_choices": ["Yes", "No"]},
]


def main():
    rng = random.Random(SEED)
    corpus(rng)
    labeled(rng)
    eval_tasks(rng)
    with open(os.path.join(ROOT, "templates.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(TEMPLATES, f, ensure_ascii=False, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
